"""Command-line entry point (``mvpdetect``).

Exit codes: 0 success, 1 usage error, 2 data error, 3 computation error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import classifiers, evaluation, synth
from .config import ExperimentConfig, load_config
from .errors import ConfigError, DetectorError, UnknownAsr
from .features import build_dataset, build_feature_vector, read_features, write_features
from .ingest import load_store, read_manifest, save_store, transcribe_all, write_manifest
from .similarity import METHODS, SimilarityMethod, score
from .textnorm import encode_text

log = logging.getLogger("mvpdetect")

EXIT_USAGE = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dump_json(obj, path: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True)
    if path:
        Path(path).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _read_lines(path: str) -> list[str]:
    return [ln.strip() for ln in Path(path).read_text(encoding="utf-8").splitlines() if ln.strip()]


def _check_header(cfg: ExperimentConfig, aux: tuple[str, ...]) -> None:
    if aux != cfg.system.auxiliary_asrs:
        raise ConfigError(f"feature columns {list(aux)} do not match configured auxiliaries "
                          f"{list(cfg.system.auxiliary_asrs)}")


def _hyper(cfg: ExperimentConfig | None, kind: str, args) -> dict:
    from .config import DEFAULT_HYPER
    hyper = dict(cfg.hyper(kind) if cfg else DEFAULT_HYPER.get(kind, {}))
    overrides = {
        "svm": {"C": args.C, "tol": args.tol},
        "knn": {"k": args.k},
        "forest": {"n_trees": args.n_trees, "seed": args.seed},
        "threshold": {"max_fpr": args.max_fpr},
    }[kind]
    hyper.update({k: v for k, v in overrides.items() if v is not None})
    return hyper


def cmd_encode(args):
    print(encode_text(" ".join(args.text)))


def cmd_sim(args):
    try:
        method = SimilarityMethod.parse(args.method)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(f"{score(method, args.a, args.b):.4f}")


def cmd_features(args):
    cfg = load_config(args.config)
    store = load_store(args.transcripts)
    manifest = read_manifest(args.manifest)
    vectors = build_dataset(cfg.system, store, manifest)
    write_features(args.out, vectors, cfg.system.auxiliary_asrs)
    log.info("wrote %d feature vectors to %s", len(vectors), args.out)


def cmd_train(args):
    cfg = load_config(args.config)
    table = read_features(args.features)
    _check_header(cfg, table.auxiliary_asrs)
    hyper = _hyper(cfg, args.model, args)
    model = classifiers.train(args.model, table.vectors, config=cfg.system, **hyper)
    classifiers.save_model(model, args.out)
    log.info("trained %s on %d vectors -> %s", args.model, len(table.vectors), args.out)


def cmd_detect(args):
    model = classifiers.load_model(args.model)
    system = model.config
    if system is None:
        raise ConfigError("model file does not embed a system configuration")
    if args.transcripts:
        store = load_store(args.transcripts)
        transcripts = {asr: store[(args.audio_id, asr)] for asr in system.asr_ids
                       if (args.audio_id, asr) in store}
    elif args.config:
        cfg = load_config(args.config)
        audio = Path(args.audio).read_bytes() if args.audio else None
        backends = [b for b in cfg.backends if b.asr_id in system.asr_ids]
        transcripts = transcribe_all(backends, args.audio_id, audio)
    else:
        raise UsageError("detect needs --transcripts or --config")
    fv = build_feature_vector(system, transcripts, args.audio_id)
    result = model.predict(fv)
    out = {
        "audio_id": args.audio_id,
        "verdict": result.verdict,
        "decision_value": result.decision_value,
        "model": model.kind,
        "transcripts": {asr: transcripts[asr].text for asr in system.asr_ids},
        "scores": dict(zip(system.auxiliary_asrs, fv.scores)),
    }
    if args.json:
        _dump_json(out, None)
        return
    print(f"audio {args.audio_id}: {result.verdict} ({model.kind}, decision {result.decision_value:.4f})")
    print(f"  {system.target_asr} [target]: {out['transcripts'][system.target_asr]}")
    for asr, s in out["scores"].items():
        print(f"  {asr} [{s:.4f}]: {out['transcripts'][asr]}")


def cmd_eval_cv(args):
    cfg = load_config(args.config)
    table = read_features(args.features)
    _check_header(cfg, table.auxiliary_asrs)
    k = args.folds or cfg.eval.get("k", 5)
    seed = args.seed if args.seed is not None else cfg.eval.get("seed", cfg.seed)
    results = {}
    summary = {"k": k, "seed": seed, "stratified": True, "system": cfg.system.describe(),
               "method": cfg.system.method.name, "models": {}}
    for kind in args.model:
        hyper = _hyper(cfg, kind, args)
        rep = evaluation.cross_validate(
            lambda data, kind=kind, hyper=hyper: classifiers.train(kind, data, config=cfg.system, **hyper),
            table.vectors, k, seed)
        results[(kind, cfg.system.describe())] = rep
        summary["models"][kind] = rep.to_dict()
    print(evaluation.format_cv_table(results))
    if args.json:
        _dump_json(summary, args.json)


def cmd_eval_defense(args):
    model = classifiers.load_model(args.model)
    table = read_features(args.features)
    if model.config is not None and table.auxiliary_asrs != model.config.auxiliary_asrs:
        raise ConfigError("feature columns do not match the model's auxiliaries")
    rate = evaluation.defense_rate(model, table.vectors)
    print(f"defense rate: {rate:.4f} ({round(rate * len(table.vectors))}/{len(table.vectors)})")


def cmd_eval_roc(args):
    table = read_features(args.features)
    benign = [v for v in table.vectors if v.label == "benign"]
    ae = [v for v in table.vectors if v.label == "ae"]
    curve = evaluation.roc(evaluation.aggregate_scores(benign), evaluation.aggregate_scores(ae))
    print(f"AUC: {curve.auc:.4f}")
    if args.out:
        _dump_json(curve.to_dict(), args.out)


def cmd_eval_hist(args):
    table = read_features(args.features)
    hist = evaluation.score_histogram(table.vectors, args.bins)
    print(f"benign/ae histogram overlap: {hist.overlap():.4f}")
    if args.out:
        hist.write_csv(args.out)


def cmd_synth_corpus(args):
    cfg = load_config(args.config)
    seed = args.seed if args.seed is not None else cfg.seed
    spec = synth.CorpusSpec(args.n_benign, args.n_ae, args.wer, seed, args.kind, args.untargeted_wer)
    hosts = _read_lines(args.hosts) if args.hosts else synth.HOST_TEXTS
    commands = _read_lines(args.commands) if args.commands else synth.COMMANDS
    store, manifest = synth.synth_corpus(spec, cfg.system, hosts, commands)
    save_store(store, args.out_transcripts)
    write_manifest(manifest, args.out_manifest)


def _pools_from(args, cfg):
    table = read_features(args.features)
    _check_header(cfg, table.auxiliary_asrs)
    benign = [v for v in table.vectors if v.label == "benign"]
    ae = [v for v in table.vectors if v.label == "ae"]
    return synth.build_pools(benign, ae)


def cmd_synth_mae(args):
    cfg = load_config(args.config)
    seed = args.seed if args.seed is not None else cfg.seed
    pools = _pools_from(args, cfg)
    if args.type:
        types = synth.mae_types(cfg.system)
        if args.type not in types:
            raise UnknownAsr(f"unknown MAE type {args.type!r}; available: {list(types)}")
        mae = types[args.type]
    elif args.fooled:
        mae = synth.MaeType(frozenset(a.strip() for a in args.fooled.split(",")))
    else:
        raise UsageError("synth mae needs --type or --fooled")
    vectors = synth.synth_mae(pools, cfg.system, mae, args.count, seed)
    write_features(args.out, vectors, cfg.system.auxiliary_asrs)


def cmd_synth_comprehensive(args):
    cfg = load_config(args.config)
    seed = args.seed if args.seed is not None else cfg.seed
    pools = _pools_from(args, cfg)
    vectors = synth.synth_comprehensive(pools, cfg.system, args.count_per_type, seed)
    write_features(args.out, vectors, cfg.system.auxiliary_asrs)


def cmd_timing(args):
    cfg = load_config(args.config)
    if args.model:
        model = classifiers.load_model(args.model, expected=cfg.system)
    else:
        model = classifiers.ThresholdModel(0.5, cfg.system.n, cfg.system)
    report = evaluation.timing_report(cfg.system, cfg.backends, model, args.sample)
    _dump_json(report.to_dict(), args.out)


def _add_hyper_flags(p):
    p.add_argument("--C", type=float, help="SVM box constraint")
    p.add_argument("--tol", type=float, help="SVM KKT tolerance")
    p.add_argument("--k", type=int, help="KNN neighbours")
    p.add_argument("--n-trees", type=int, help="random forest size")
    p.add_argument("--seed", type=int, help="seed (forest, folds, synthesis)")
    p.add_argument("--max-fpr", type=float, help="threshold model false-positive budget")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mvpdetect",
                     description="Detect adversarial audio by cross-checking ASR transcripts.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("encode", help="phonetic encoding of a transcript")
    p.add_argument("text", nargs="+")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("sim", help="similarity of two transcripts")
    p.add_argument("--method", default="pe_jaro_winkler",
                   help="one of: " + ", ".join(m.name for m in METHODS))
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_sim)

    p = sub.add_parser("features", help="build feature vectors from transcripts")
    p.add_argument("--config", required=True)
    p.add_argument("--transcripts", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("train", help="train a classifier")
    p.add_argument("--model", required=True, choices=classifiers.MODEL_KINDS)
    p.add_argument("--config", required=True)
    p.add_argument("--features", required=True)
    p.add_argument("--out", required=True)
    _add_hyper_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("detect", help="classify one audio")
    p.add_argument("--model", required=True)
    p.add_argument("--audio-id", required=True)
    p.add_argument("--transcripts", help="JSONL store holding the audio's transcripts")
    p.add_argument("--config", help="config whose backends are queried when --transcripts is absent")
    p.add_argument("--audio", help="audio file sent to http backends")
    p.add_argument("--json", action="store_true", help="print a JSON document")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("eval", help="evaluation reports")
    esub = p.add_subparsers(dest="eval_command", metavar="REPORT", parser_class=_Parser)
    esub.required = True
    e = esub.add_parser("cv", help="k-fold cross validation")
    e.add_argument("--config", required=True)
    e.add_argument("--features", required=True)
    e.add_argument("--model", nargs="+", default=["svm", "knn", "forest"],
                   choices=classifiers.MODEL_KINDS)
    e.add_argument("--folds", type=int)
    e.add_argument("--json", help="write the JSON report here")
    _add_hyper_flags(e)
    e.set_defaults(func=cmd_eval_cv)
    e = esub.add_parser("defense", help="defense rate on an ae-only feature file")
    e.add_argument("--model", required=True)
    e.add_argument("--features", required=True)
    e.set_defaults(func=cmd_eval_defense)
    e = esub.add_parser("roc", help="ROC curve of the min-score threshold rule")
    e.add_argument("--features", required=True)
    e.add_argument("--out")
    e.set_defaults(func=cmd_eval_roc)
    e = esub.add_parser("hist", help="per-label score histogram")
    e.add_argument("--features", required=True)
    e.add_argument("--bins", type=int, default=20)
    e.add_argument("--out", help="CSV output")
    e.set_defaults(func=cmd_eval_hist)

    p = sub.add_parser("synth", help="synthetic datasets")
    ssub = p.add_subparsers(dest="synth_command", metavar="KIND", parser_class=_Parser)
    ssub.required = True
    s = ssub.add_parser("corpus", help="synthetic transcript corpus")
    s.add_argument("--config", required=True)
    s.add_argument("--n-benign", type=int, required=True)
    s.add_argument("--n-ae", type=int, required=True)
    s.add_argument("--wer", type=float, default=0.1)
    s.add_argument("--seed", type=int)
    s.add_argument("--kind", choices=["targeted", "untargeted"], default="targeted")
    s.add_argument("--untargeted-wer", type=float, default=0.8)
    s.add_argument("--hosts", help="file with one host sentence per line")
    s.add_argument("--commands", help="file with one command per line")
    s.add_argument("--out-transcripts", required=True)
    s.add_argument("--out-manifest", required=True)
    s.set_defaults(func=cmd_synth_corpus)
    s = ssub.add_parser("mae", help="hypothetical multiple-ASR-effective AEs")
    s.add_argument("--config", required=True)
    s.add_argument("--features", required=True, help="labelled vectors the score pools come from")
    s.add_argument("--type", help="Type-1 ... Type-N")
    s.add_argument("--fooled", help="comma-separated fooled ASRs, target included")
    s.add_argument("--count", type=int, required=True)
    s.add_argument("--seed", type=int)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_synth_mae)
    s = ssub.add_parser("comprehensive", help="AEs fooling all but one auxiliary")
    s.add_argument("--config", required=True)
    s.add_argument("--features", required=True)
    s.add_argument("--count-per-type", type=int, required=True)
    s.add_argument("--seed", type=int)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_synth_comprehensive)

    p = sub.add_parser("timing", help="per-stage detection overhead")
    p.add_argument("--config", required=True)
    p.add_argument("--sample", nargs="+", required=True, help="audio ids to time")
    p.add_argument("--model")
    p.add_argument("--out")
    p.set_defaults(func=cmd_timing)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except UsageError as exc:
        print(f"mvpdetect: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DetectorError as exc:
        print(f"mvpdetect: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"mvpdetect: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
