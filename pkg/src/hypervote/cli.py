"""Command-line interface.

Subcommands: train, predict, cv, sweep-pop, sweep-threshold, ruleout,
ablate, synth. Every run echoes the resolved configuration as a `#` header
line, so any output is reproducible from the output itself. Tabular output
is comma-separated with a header row; exit status is 0 on success and 1 on
any error, with a one-line diagnostic on stderr.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .data_io import (
    RawDataset,
    load_csv,
    load_ensemble,
    load_feature_matrix,
    parse_run_config,
    save_ensemble,
    write_csv,
)
from .ensemble import (
    EnsembleConfig,
    PredictionRecord,
    final_prediction,
    score_population,
    thresholded_prediction,
    train_population,
)
from .errors import HypervoteError
from .evaluate import (
    EvalReport,
    ablation_run,
    cross_validate,
    population_sweep,
    ruleout_sweep,
    threshold_sweep,
)
from .ruleout import TECHNIQUES
from .synth import gaussian_mixture, interaction_only

_DEFAULTS = {
    "order": 1,
    "widths": 50,
    "origins": 10,
    "width_low": 0.2,
    "width_high": 1.5,
    "origin_low": -0.5,
    "origin_high": 0.5,
    "seed": 0,
    "folds": 5,
    "theta": None,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (HypervoteError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypervote",
        description="Hypergraph-ensemble classifier over discretized feature interactions.",
    )
    parser.add_argument("--version", action="version", version=f"hypervote {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="train an ensemble and save it to a file")
    _add_data_options(train)
    _add_sampling_options(train)
    train.add_argument("--out", required=True, help="output ensemble file")
    train.set_defaults(func=_cmd_train)

    predict = sub.add_parser("predict", help="classify rows with a saved ensemble")
    predict.add_argument("--ensemble", required=True, help="ensemble file from `train`")
    predict.add_argument("--data", required=True, help="input rows (header + feature columns)")
    predict.add_argument("--theta", type=float, default=None,
                         help="decision threshold; winning vote fraction must strictly exceed it")
    predict.set_defaults(func=_cmd_predict)

    cv = sub.add_parser("cv", help="stratified k-fold cross-validation report")
    _add_eval_options(cv)
    cv.set_defaults(func=_cmd_cv)

    pop = sub.add_parser("sweep-pop", help="accuracy across population-size prefixes")
    _add_eval_options(pop)
    pop.add_argument("--sizes", required=True,
                     help="comma-separated population sizes (each <= widths*origins)")
    pop.set_defaults(func=_cmd_sweep_pop)

    thr = sub.add_parser("sweep-threshold",
                         help="accuracy and classified fraction across decision thresholds")
    _add_eval_options(thr)
    thr.add_argument("--thetas", required=True, help="comma-separated decision thresholds")
    thr.set_defaults(func=_cmd_sweep_threshold)

    ro = sub.add_parser("ruleout", help="hit rate and classes ruled out across mass thresholds")
    _add_eval_options(ro)
    ro.add_argument("--technique", choices=TECHNIQUES, required=True,
                    help="mass source: vote frequencies or averaged distributions")
    ro.add_argument("--thresholds", required=True,
                    help="comma-separated cumulative-mass thresholds in (0, 1]")
    ro.set_defaults(func=_cmd_ruleout)

    ab = sub.add_parser("ablate", help="cross-validate with features removed or kept")
    _add_eval_options(ab)
    ab.add_argument("--drop", action="append", default=[],
                    help="comma-separated features to remove (one run per flag)")
    ab.add_argument("--keep", action="append", default=[],
                    help="comma-separated features to keep (one run per flag)")
    ab.add_argument("--each", action="store_true",
                    help="additionally run once per single dropped feature")
    ab.set_defaults(func=_cmd_ablate)

    synth = sub.add_parser("synth", help="generate a synthetic dataset CSV")
    synth.add_argument("--generator", choices=("gaussian", "interaction"), required=True)
    synth.add_argument("--classes", type=int, default=3, help="gaussian: number of classes")
    synth.add_argument("--features", type=int, default=4, help="gaussian: number of features")
    synth.add_argument("--per-class", type=int, default=100, help="units per class")
    synth.add_argument("--separation", type=float, default=1.0,
                       help="gaussian: distance between adjacent class means")
    synth.add_argument("--noise-features", type=int, default=4,
                       help="interaction: number of pure-noise columns")
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--out", required=True, help="output CSV path")
    synth.set_defaults(func=_cmd_synth)

    return parser


def _add_data_options(parser) -> None:
    parser.add_argument("--data", default=None, help="dataset CSV (header + label column)")
    parser.add_argument("--label", default=None, help="name of the label column")
    parser.add_argument("--config", default=None,
                        help="key = value file supplying defaults for any option")


def _add_sampling_options(parser) -> None:
    parser.add_argument("--order", "--eta", dest="order", type=int, default=None,
                        help="interaction order (features per hyperedge)")
    parser.add_argument("--widths", "--lengths", dest="widths", type=int, default=None,
                        help="number of interval widths to sample")
    parser.add_argument("--origins", type=int, default=None,
                        help="number of origins to sample")
    parser.add_argument("--width-low", type=float, default=None)
    parser.add_argument("--width-high", type=float, default=None)
    parser.add_argument("--origin-low", type=float, default=None)
    parser.add_argument("--origin-high", type=float, default=None)
    parser.add_argument("--seed", type=int, default=None, help="master sampling seed")


def _add_eval_options(parser) -> None:
    _add_data_options(parser)
    _add_sampling_options(parser)
    parser.add_argument("--folds", type=int, default=None, help="cross-validation folds")
    parser.add_argument("--theta", type=float, default=None,
                        help="optional decision threshold (strict inequality)")


class _Settings:
    """Option resolution: explicit flag, then config file, then built-in default."""

    def __init__(self, args):
        self.args = args
        self.file_values = {}
        if getattr(args, "config", None):
            self.file_values = parse_run_config(args.config)

    def get(self, key, cast):
        value = getattr(self.args, key, None)
        if value is not None:
            return value
        if key in self.file_values:
            raw = self.file_values[key]
            try:
                return cast(raw)
            except ValueError:
                raise ValueError(
                    f"config value for {key!r} is not a valid {cast.__name__}: {raw!r}"
                ) from None
        return _DEFAULTS.get(key)

    def ensemble_config(self) -> EnsembleConfig:
        return EnsembleConfig(
            n_widths=self.get("widths", int),
            n_origins=self.get("origins", int),
            order=self.get("order", int),
            width_bounds=(self.get("width_low", float), self.get("width_high", float)),
            origin_bounds=(self.get("origin_low", float), self.get("origin_high", float)),
            seed=self.get("seed", int),
        )

    def dataset(self) -> RawDataset:
        data = self.get("data", str)
        label = self.get("label", str)
        if not data:
            raise ValueError("--data is required (flag or config file)")
        if not label:
            raise ValueError("--label is required (flag or config file)")
        return load_csv(data, label)

    def header(self, command: str) -> str:
        config = self.ensemble_config()
        theta = self.get("theta", float)
        fields = [
            f"data={self.get('data', str)}",
            f"label={self.get('label', str)}",
            f"order={config.order}",
            f"widths={config.n_widths}",
            f"origins={config.n_origins}",
            f"width_bounds=[{config.width_bounds[0]:g},{config.width_bounds[1]:g}]",
            f"origin_bounds=[{config.origin_bounds[0]:g},{config.origin_bounds[1]:g}]",
            f"seed={config.seed}",
            f"folds={self.get('folds', int)}",
            f"theta={'-' if theta is None else f'{theta:g}'}",
        ]
        return f"# hypervote {command} " + " ".join(fields)


def _fmt(x) -> str:
    return f"{x:.6f}"


def _parse_grid(text: str, cast) -> list:
    try:
        return [cast(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise ValueError(f"could not parse list {text!r}") from None


def _print_report(report: EvalReport) -> None:
    print("metric,value")
    print(f"accuracy,{_fmt(report.accuracy)}")
    print(f"standard_error,{_fmt(report.standard_error)}")
    print(f"classified_fraction,{_fmt(report.classified_fraction)}")
    print()
    print("fold,accuracy")
    for i, acc in enumerate(report.fold_accuracies, start=1):
        print(f"{i},{_fmt(acc)}")
    print()
    names = report.label_names
    print("confusion," + ",".join(f"true_{n}" for n in names))
    for i, name in enumerate(names):
        print(f"out_{name}," + ",".join(str(v) for v in report.confusion[i]))
    print()
    print("class,tpr,fpr,tnr,fnr")
    for i, name in enumerate(names):
        print(
            f"{name},{_fmt(report.true_positive_rate[i])},"
            f"{_fmt(report.false_positive_rate[i])},"
            f"{_fmt(report.true_negative_rate[i])},"
            f"{_fmt(report.false_negative_rate[i])}"
        )


def _cmd_train(args) -> int:
    settings = _Settings(args)
    raw = settings.dataset()
    ens = train_population(raw, settings.ensemble_config())
    save_ensemble(ens, args.out)
    print(settings.header("train"))
    print("models,features,classes,path")
    print(f"{len(ens.models)},{ens.n_features},{ens.n_classes},{args.out}")
    return 0


def _cmd_predict(args) -> int:
    ens = load_ensemble(args.ensemble)
    values = load_feature_matrix(args.data, ens.feature_names)
    theta = args.theta
    votes, means = score_population(values, ens)
    names = ens.label_names
    print(
        f"# hypervote predict ensemble={args.ensemble} data={args.data} "
        f"theta={'-' if theta is None else f'{theta:g}'} "
        f"models={len(ens.models)} seed={ens.config.seed}"
    )
    print("unit,prediction,top_fraction," + ",".join(f"frac_{n}" for n in names))
    for i in range(values.shape[0]):
        rec = PredictionRecord(votes[i], means[i])
        counts = np.bincount(rec.votes - 1, minlength=ens.n_classes)
        fractions = counts / rec.population
        if theta is None:
            label = names[final_prediction(rec) - 1]
        else:
            pred = thresholded_prediction(rec, theta)
            label = "UNCLASSIFIED" if pred is None else names[pred - 1]
        row = [str(i + 1), label, _fmt(fractions.max())]
        row += [_fmt(f) for f in fractions]
        print(",".join(row))
    return 0


def _cmd_cv(args) -> int:
    settings = _Settings(args)
    raw = settings.dataset()
    report = cross_validate(
        raw,
        settings.ensemble_config(),
        settings.get("folds", int),
        settings.get("seed", int),
        settings.get("theta", float),
    )
    print(settings.header("cv"))
    _print_report(report)
    return 0


def _cmd_sweep_pop(args) -> int:
    settings = _Settings(args)
    raw = settings.dataset()
    sizes = _parse_grid(args.sizes, int)
    results = population_sweep(
        raw, settings.ensemble_config(), sizes,
        settings.get("folds", int), settings.get("seed", int),
    )
    print(settings.header("sweep-pop"))
    print("size,accuracy,standard_error,classified_fraction")
    for size, report in results:
        print(
            f"{size},{_fmt(report.accuracy)},{_fmt(report.standard_error)},"
            f"{_fmt(report.classified_fraction)}"
        )
    return 0


def _cmd_sweep_threshold(args) -> int:
    settings = _Settings(args)
    raw = settings.dataset()
    thetas = _parse_grid(args.thetas, float)
    results = threshold_sweep(
        raw, settings.ensemble_config(), thetas,
        settings.get("folds", int), settings.get("seed", int),
    )
    print(settings.header("sweep-threshold"))
    print("theta,accuracy,classified_fraction")
    for theta, report in results:
        print(f"{theta:g},{_fmt(report.accuracy)},{_fmt(report.classified_fraction)}")
    return 0


def _cmd_ruleout(args) -> int:
    settings = _Settings(args)
    raw = settings.dataset()
    thresholds = _parse_grid(args.thresholds, float)
    rows = ruleout_sweep(
        raw, settings.ensemble_config(), args.technique, thresholds,
        settings.get("folds", int), settings.get("seed", int),
    )
    print(settings.header("ruleout") + f" technique={args.technique}")
    print("threshold,hit_rate,mean_ruled_out")
    for threshold, hit_rate, ruled in rows:
        print(f"{threshold:g},{_fmt(hit_rate)},{_fmt(ruled)}")
    return 0


def _resolve_features(tokens: list[str], raw: RawDataset) -> list[int]:
    """Map feature names (or 1-based indices) to 1-based indices."""
    out = []
    for token in tokens:
        token = token.strip()
        if token in raw.feature_names:
            out.append(raw.feature_names.index(token) + 1)
            continue
        try:
            idx = int(token)
        except ValueError:
            raise ValueError(
                f"unknown feature {token!r}; columns are {list(raw.feature_names)}"
            ) from None
        if not 1 <= idx <= raw.n_features:
            raise ValueError(f"feature index {idx} out of range 1..{raw.n_features}")
        out.append(idx)
    return out


def _cmd_ablate(args) -> int:
    settings = _Settings(args)
    raw = settings.dataset()
    config = settings.ensemble_config()
    folds = settings.get("folds", int)
    seed = settings.get("seed", int)
    theta = settings.get("theta", float)

    runs: list[tuple[str, dict]] = []
    if not args.drop and not args.keep and not args.each:
        runs.append(("all", {}))
    for spec_text in args.drop:
        indices = _resolve_features(spec_text.split(","), raw)
        name = "drop:" + "+".join(raw.feature_names[j - 1] for j in indices)
        runs.append((name, {"drop": indices}))
    for spec_text in args.keep:
        indices = _resolve_features(spec_text.split(","), raw)
        name = "keep:" + "+".join(raw.feature_names[j - 1] for j in indices)
        runs.append((name, {"keep": indices}))
    if args.each:
        for j in range(1, raw.n_features + 1):
            runs.append((f"drop:{raw.feature_names[j - 1]}", {"drop": [j]}))

    print(settings.header("ablate"))
    print("variant,accuracy,standard_error,classified_fraction")
    for name, kwargs in runs:
        report = ablation_run(raw, config, folds, seed, theta=theta, **kwargs)
        print(
            f"{name},{_fmt(report.accuracy)},{_fmt(report.standard_error)},"
            f"{_fmt(report.classified_fraction)}"
        )
    return 0


def _cmd_synth(args) -> int:
    if args.generator == "gaussian":
        raw = gaussian_mixture(
            args.classes, args.features, args.per_class, args.separation, args.seed
        )
    else:
        raw = interaction_only(args.per_class, args.noise_features, args.seed)
    write_csv(raw, args.out)
    print(
        f"# hypervote synth generator={args.generator} seed={args.seed} out={args.out}"
    )
    print("units,features,classes,path")
    print(f"{raw.n_units},{raw.n_features},{raw.n_classes},{args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
