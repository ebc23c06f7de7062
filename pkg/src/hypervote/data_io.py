"""Dataset ingestion, run configuration, and ensemble serialization.

The ensemble file format is a versioned binary container: magic string,
version integer, one header (sampling config, names, class sizes, shared
feature statistics), the per-model sparse weight maps in full float64
precision, and a trailing SHA-256 checksum. Loading verifies the checksum
before constructing anything, so a truncated or corrupted file never yields
a partial ensemble.
"""

from __future__ import annotations

import csv
import hashlib
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .ensemble import EnsembleConfig, EnsembleModel
from .errors import DataError, EnsembleFormatError
from .model import HypergraphModel
from .preprocess import FeatureStats, PartitionParams

_MAGIC = b"HVOTENS\x00"
_VERSION = 1
_WEIGHT_ROW_TOL = 1e-9


@dataclass(frozen=True)
class RawDataset:
    """units x features measurement table with 1-based class labels."""

    values: np.ndarray
    labels: np.ndarray
    feature_names: tuple[str, ...]
    label_names: tuple[str, ...]

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        labels = np.asarray(self.labels, dtype=np.int64)
        feature_names = tuple(str(s) for s in self.feature_names)
        label_names = tuple(str(s) for s in self.label_names)
        if values.ndim != 2:
            raise ValueError("values must be a 2-D array")
        if labels.shape != (values.shape[0],):
            raise ValueError("labels must have one entry per unit")
        if not np.all(np.isfinite(values)):
            raise DataError("dataset contains non-finite values")
        if len(feature_names) != values.shape[1]:
            raise ValueError("one feature name per column is required")
        if not label_names:
            raise ValueError("at least one class is required")
        if labels.size and (labels.min() < 1 or labels.max() > len(label_names)):
            raise ValueError("labels must be 1-based class indices")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "feature_names", feature_names)
        object.__setattr__(self, "label_names", label_names)

    @property
    def n_units(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.label_names)

    def subset(self, selector) -> "RawDataset":
        """Row-subset view (labels and names preserved)."""
        return RawDataset(
            self.values[selector], self.labels[selector],
            self.feature_names, self.label_names,
        )

    def select_features(self, column_indices) -> "RawDataset":
        """Column-restricted copy; `column_indices` are 0-based."""
        idx = list(column_indices)
        return RawDataset(
            self.values[:, idx],
            self.labels,
            tuple(self.feature_names[j] for j in idx),
            self.label_names,
        )


def iris_path() -> Path:
    """Location of the bundled 150-unit iris measurements fixture."""
    return Path(__file__).parent / "data" / "iris.csv"


def load_csv(path, label_column: str) -> RawDataset:
    """Parse a headered delimiter-separated file into a RawDataset.

    The label column is mapped to class indices in first-appearance order;
    all other columns must be numeric. Errors cite the offending file line
    and column.
    """
    path = Path(path)
    with open(path, newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: file is empty") from None
        header = [h.strip() for h in header]
        if label_column not in header:
            raise ValueError(
                f"{path}: label column {label_column!r} not found; "
                f"columns are {header}"
            )
        label_idx = header.index(label_column)
        feature_names = [h for i, h in enumerate(header) if i != label_idx]
        if len(set(feature_names)) != len(feature_names):
            raise DataError(f"{path}: duplicate feature column names")
        rows = []
        labels = []
        label_order: dict[str, int] = {}
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise DataError(
                    f"{path}: line {line_no} has {len(row)} fields, expected {len(header)}"
                )
            parsed = []
            for i, cell in enumerate(row):
                if i == label_idx:
                    continue
                try:
                    value = float(cell)
                except ValueError:
                    raise DataError(
                        f"{path}: non-numeric value {cell.strip()!r} at line "
                        f"{line_no}, column {header[i]!r}"
                    ) from None
                if not np.isfinite(value):
                    raise DataError(
                        f"{path}: non-finite value at line {line_no}, "
                        f"column {header[i]!r}"
                    )
                parsed.append(value)
            name = row[label_idx].strip()
            if name not in label_order:
                label_order[name] = len(label_order) + 1
            labels.append(label_order[name])
            rows.append(parsed)
    if not rows:
        raise DataError(f"{path}: no data rows")
    return RawDataset(
        np.array(rows, dtype=float),
        np.array(labels, dtype=np.int64),
        tuple(feature_names),
        tuple(label_order),
    )


def load_feature_matrix(path, feature_names) -> np.ndarray:
    """Read the named numeric columns of a headered file, in the given order."""
    path = Path(path)
    feature_names = list(feature_names)
    with open(path, newline="") as f:
        reader = csv.reader(f)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path}: file is empty") from None
        missing = [name for name in feature_names if name not in header]
        if missing:
            raise ValueError(f"{path}: missing feature columns {missing}")
        order = [header.index(name) for name in feature_names]
        rows = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            parsed = []
            for i in order:
                if i >= len(row):
                    raise DataError(f"{path}: line {line_no} is too short")
                try:
                    value = float(row[i])
                except ValueError:
                    raise DataError(
                        f"{path}: non-numeric value {row[i].strip()!r} at line "
                        f"{line_no}, column {header[i]!r}"
                    ) from None
                if not np.isfinite(value):
                    raise DataError(
                        f"{path}: non-finite value at line {line_no}, "
                        f"column {header[i]!r}"
                    )
                parsed.append(value)
            rows.append(parsed)
    if not rows:
        raise DataError(f"{path}: no data rows")
    return np.array(rows, dtype=float)


def write_csv(raw: RawDataset, path, label_column: str = "label") -> None:
    """Write a RawDataset in the schema load_csv reads (full float precision)."""
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(list(raw.feature_names) + [label_column])
        for row, label in zip(raw.values, raw.labels):
            writer.writerow([repr(float(v)) for v in row] + [raw.label_names[label - 1]])


def parse_run_config(path) -> dict[str, str]:
    """Read `key = value` lines (# comments allowed) into a string map."""
    out: dict[str, str] = {}
    with open(path) as f:
        for line_no, line in enumerate(f, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ValueError(
                    f"{path}: line {line_no} is not a 'key = value' assignment"
                )
            key, _, value = stripped.partition("=")
            out[key.strip().lower()] = value.strip()
    return out


def save_ensemble(ens: EnsembleModel, path) -> None:
    """Serialize a trained ensemble; see the module docstring for the layout."""
    parts = [_MAGIC, struct.pack("<I", _VERSION)]
    cfg = ens.config
    parts.append(
        struct.pack(
            "<qiii4d",
            cfg.seed,
            cfg.n_widths,
            cfg.n_origins,
            cfg.order,
            *cfg.width_bounds,
            *cfg.origin_bounds,
        )
    )
    first = ens.models[0]
    parts.append(struct.pack("<ii", first.n_features, first.n_classes))
    for name in (*ens.feature_names, *ens.label_names):
        raw = name.encode("utf-8")
        parts.append(struct.pack("<i", len(raw)))
        parts.append(raw)
    parts.append(first.class_counts.astype("<i8").tobytes())
    parts.append(first.stats.mean.astype("<f8").tobytes())
    parts.append(first.stats.std.astype("<f8").tobytes())
    parts.append(struct.pack("<i", len(ens.models)))
    for model in ens.models:
        parts.append(
            struct.pack(
                "<2d3q",
                model.params.width,
                model.params.origin,
                model.bin_min,
                model.bin_max,
                model.keys.size,
            )
        )
        parts.append(model.keys.astype("<i8").tobytes())
        parts.append(model.weights.astype("<f8").tobytes())
    blob = b"".join(parts)
    with open(path, "wb") as f:
        f.write(blob)
        f.write(hashlib.sha256(blob).digest())


def load_ensemble(path) -> EnsembleModel:
    """Read an ensemble file, verifying checksum and model invariants."""
    path = Path(path)
    data = path.read_bytes()
    if len(data) < len(_MAGIC) + 4 + 32:
        raise EnsembleFormatError(f"{path}: file truncated")
    if data[: len(_MAGIC)] != _MAGIC:
        raise EnsembleFormatError(f"{path}: not an ensemble file (bad magic string)")
    blob, digest = data[:-32], data[-32:]
    if hashlib.sha256(blob).digest() != digest:
        raise EnsembleFormatError(f"{path}: checksum mismatch (corrupted or truncated)")
    cursor = _Cursor(blob, len(_MAGIC), path)
    (version,) = cursor.unpack("<I")
    if version != _VERSION:
        raise EnsembleFormatError(
            f"{path}: unsupported format version {version} (expected {_VERSION})"
        )
    seed, n_widths, n_origins, order, wlo, whi, olo, ohi = cursor.unpack("<qiii4d")
    n_features, n_classes = cursor.unpack("<ii")
    names = []
    for _ in range(n_features + n_classes):
        (length,) = cursor.unpack("<i")
        names.append(cursor.take(length).decode("utf-8"))
    feature_names = tuple(names[:n_features])
    label_names = tuple(names[n_features:])
    class_counts = cursor.array("<i8", n_classes)
    stats = FeatureStats(
        cursor.array("<f8", n_features), cursor.array("<f8", n_features)
    )
    (n_models,) = cursor.unpack("<i")
    config = EnsembleConfig(
        n_widths=n_widths,
        n_origins=n_origins,
        order=order,
        width_bounds=(wlo, whi),
        origin_bounds=(olo, ohi),
        seed=seed,
    )
    if n_models != config.population:
        raise EnsembleFormatError(
            f"{path}: header declares {n_models} models, config implies "
            f"{config.population}"
        )
    models = []
    for _ in range(n_models):
        width, origin, bin_min, bin_max, n_keys = cursor.unpack("<2d3q")
        keys = cursor.array("<i8", n_keys)
        weights = cursor.array("<f8", n_keys * n_classes).reshape(n_keys, n_classes)
        if n_keys and np.max(np.abs(weights.sum(axis=1) - 1.0)) > _WEIGHT_ROW_TOL:
            raise EnsembleFormatError(
                f"{path}: stored weight rows do not sum to 1"
            )
        models.append(
            HypergraphModel(
                order=order,
                params=PartitionParams(width, origin),
                stats=stats,
                bin_min=int(bin_min),
                bin_max=int(bin_max),
                class_counts=class_counts,
                keys=keys,
                weights=weights,
            )
        )
    cursor.expect_end()
    return EnsembleModel(config, tuple(models), feature_names, label_names)


class _Cursor:
    """Sequential reader over a bytes blob with format-error diagnostics."""

    def __init__(self, blob: bytes, offset: int, path):
        self.blob = blob
        self.offset = offset
        self.path = path

    def take(self, n: int) -> bytes:
        if n < 0 or self.offset + n > len(self.blob):
            raise EnsembleFormatError(f"{self.path}: unexpected end of data")
        out = self.blob[self.offset : self.offset + n]
        self.offset += n
        return out

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))

    def array(self, dtype: str, count: int) -> np.ndarray:
        count = int(count)
        if count < 0:
            raise EnsembleFormatError(f"{self.path}: negative array length")
        raw = self.take(count * np.dtype(dtype).itemsize)
        return np.frombuffer(raw, dtype=dtype).copy()

    def expect_end(self) -> None:
        if self.offset != len(self.blob):
            raise EnsembleFormatError(
                f"{self.path}: {len(self.blob) - self.offset} trailing bytes"
            )
