"""Command line interface: ``hardcoref <command> [options]``.

Options may also come from a JSON config file (``--config`` or the
HARDCOREF_CONFIG environment variable); flags given on the command line win.
Data paths of the form ``fixture:<name>`` refer to the bundled data files.
"""
import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .docmodel import CATEGORIES, CorpusError, data_path, dataset_stats, load_corpus, split_docs
from .eval import METRICS, EvalError, antepre_counts, dump_report, evaluate, format_report
from .infer import (DEFAULT_TAU, SYSTEMS, InfeasibleConstraints, bll_decode, read_predictions,
                    run_system, write_predictions)
from .kb import (KBError, PolarityLexicon, WebCache, build_kb, load_kb, save_kb, web_queries)
from .model import ModelError, ModelWeights, train_blmp
from .scoring import ABLATION_MASKS, DIM_NAMES, LAYOUT_VERSION, doc_context, score_pair

CONFIG_ENV = "HARDCOREF_CONFIG"
FIXTURES = {
    "winograd": "winograd_fixture.jsonl",
    "kb": "kb_corpus.jsonl",
    "polarity": "polarity.tsv",
    "web-cache": "web_cache.json",
}

# per-command defaults, applied after the config file
DEFAULTS = {
    "build-kb": {"shards": 1, "jobs": 1, "window": 3, "wiki_window": 10},
    "train": {"variant": "KnowComb", "epochs": 10, "seed": 0, "lr": 1.0, "split": "train"},
    "resolve": {"variant": "KnowComb", "tau": DEFAULT_TAU, "split": None},
    "eval": {"metrics": ",".join(METRICS)},
    "ablate": {"by": "schema-type", "variant": "KnowComb", "epochs": 10, "seed": 0, "lr": 1.0,
               "tau": DEFAULT_TAU, "train_split": "train", "split": None, "mask": "all"},
    "stats": {"split": None},
    "cache-fill": {},
}
REQUIRED = {
    "build-kb": ("corpus", "out"),
    "train": ("data", "kb", "out"),
    "resolve": ("data", "model", "kb", "out"),
    "eval": ("gold", "pred"),
    "ablate": ("data", "kb"),
    "stats": ("data",),
    "cache-fill": ("data", "out"),
}


class CliError(Exception):
    pass


def resolve_path(p):
    if p is None:
        return None
    p = str(p)
    if p.startswith("fixture:"):
        name = p.split(":", 1)[1]
        if name not in FIXTURES:
            raise CliError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}")
        return data_path(FIXTURES[name])
    return Path(p)


def _existing(p, what):
    path = resolve_path(p)
    if not path.exists():
        raise CliError(f"{what} {p} not found")
    return path


def build_parser():
    parser = argparse.ArgumentParser(prog="hardcoref", description="Knowledge-driven hard coreference resolution.")
    parser.add_argument("--config", help=f"JSON config file (default: ${CONFIG_ENV})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-kb", help="count Type1/Type2/wiki statistics from a corpus")
    p.add_argument("--corpus")
    p.add_argument("--out")
    p.add_argument("--shards", type=int)
    p.add_argument("--jobs", type=int)
    p.add_argument("--window", type=int, help="sentence window for neighbor pairs")
    p.add_argument("--wiki-window", type=int)
    p.add_argument("--lexicon", help="polarity lexicon TSV copied into the KB")
    p.add_argument("--web-cache", help="web count cache copied into the KB")

    p = sub.add_parser("train", help="train a best-link mention-pair model")
    p.add_argument("--data")
    p.add_argument("--kb")
    p.add_argument("--variant", choices=sorted(SYSTEMS))
    p.add_argument("--out")
    p.add_argument("--epochs", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--lr", type=float)
    p.add_argument("--split", help="train on documents of this split ('all' for every document)")
    p.add_argument("--report", help="training report path (default: <out>.report.json)")

    p = sub.add_parser("resolve", help="predict coreference links")
    p.add_argument("--data")
    p.add_argument("--model")
    p.add_argument("--kb")
    p.add_argument("--variant", choices=sorted(SYSTEMS))
    p.add_argument("--out")
    p.add_argument("--tau", type=float)
    p.add_argument("--split")
    p.add_argument("--dump-scores", help="write per-pair knowledge scores as TSV")

    p = sub.add_parser("eval", help="score predictions against gold documents")
    p.add_argument("--gold")
    p.add_argument("--pred")
    p.add_argument("--metrics", help="comma-separated subset of " + ",".join(METRICS))
    p.add_argument("--split")
    p.add_argument("--json", help="also write the report as JSON")

    p = sub.add_parser("ablate", help="AntePre with knowledge dims restricted by schema type or per category")
    p.add_argument("--data")
    p.add_argument("--kb")
    p.add_argument("--by", choices=["schema-type", "category"])
    p.add_argument("--variant", choices=sorted(SYSTEMS))
    p.add_argument("--mask", choices=sorted(ABLATION_MASKS), help="dims kept for --by category")
    p.add_argument("--epochs", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--lr", type=float)
    p.add_argument("--tau", type=float)
    p.add_argument("--train-split")
    p.add_argument("--split", help="evaluation split (default: every document)")
    p.add_argument("--json", help="also write the table as JSON")

    p = sub.add_parser("stats", help="dataset statistics")
    p.add_argument("--data")
    p.add_argument("--split")

    p = sub.add_parser("cache-fill", help="list web queries a dataset needs, merged into a count cache")
    p.add_argument("--data")
    p.add_argument("--cache", help="existing cache whose counts are kept")
    p.add_argument("--out")
    return parser


def load_config(path):
    if path is None:
        path = os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except FileNotFoundError:
        raise CliError(f"config file {path} not found") from None
    except json.JSONDecodeError as e:
        raise CliError(f"config file {path}: {e}") from None
    if not isinstance(cfg, dict):
        raise CliError(f"config file {path} must hold a JSON object")
    return cfg


def merge_options(args, config):
    """Fill unset flags from the config (top level, then the command's own
    section) and then from the defaults."""
    cmd = args.command
    section = config.get(cmd, {})
    layered = {**DEFAULTS[cmd], **{k: v for k, v in config.items() if not isinstance(v, dict)}, **section}
    opts = vars(args)
    for key, value in layered.items():
        key = key.replace("-", "_")
        if key in opts and opts[key] is None:
            opts[key] = value
    missing = [f"--{k.replace('_', '-')}" for k in REQUIRED[cmd] if opts.get(k) is None]
    if missing:
        raise CliError(f"{cmd}: missing required option(s) {', '.join(missing)}")
    return args


def _write_json(obj, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _docs(path, split=None):
    docs = load_corpus(_existing(path, "data file"))
    if split not in (None, "all"):
        docs = split_docs(docs, split)
    return docs


def cmd_build_kb(args):
    docs = load_corpus(_existing(args.corpus, "corpus"))
    kb, report = build_kb(docs, shards=args.shards, jobs=args.jobs, window=args.window,
                          wiki_window=args.wiki_window)
    if args.lexicon:
        kb.polarity = PolarityLexicon.load(_existing(args.lexicon, "lexicon"))
    if args.web_cache:
        kb.web = WebCache.load(_existing(args.web_cache, "web cache"))
    save_kb(kb, args.out)
    out = report.as_dict(kb)
    out.update(shards=args.shards, layout_version=LAYOUT_VERSION)
    _write_json(out, Path(args.out) / "report.json")
    return out


def _train(docs, kb, variant, epochs, seed, lr, mask=None, on_epoch=None):
    with_schema = SYSTEMS[variant][0]
    model = train_blmp(docs, kb, with_schema, epochs=epochs, learning_rate=lr, seed=seed,
                       mask=mask, on_epoch=on_epoch)
    model.metadata["variant"] = variant
    return model


def cmd_train(args):
    docs = _docs(args.data, args.split)
    if not docs:
        raise CliError(f"no documents in split {args.split!r}")
    kb = load_kb(_existing(args.kb, "KB directory"))
    history = []

    def on_epoch(epoch, model):
        preds = [bll_decode(d, model, kb) for d in docs]
        a = antepre_counts(docs, preds)
        history.append({"epoch": epoch + 1, "antepre": a.value, "correct": a.correct, "total": a.total})

    model = _train(docs, kb, args.variant, args.epochs, args.seed, args.lr, on_epoch=on_epoch)
    model.save(args.out)
    report = {"variant": args.variant, "with_schema": model.with_schema, "docs": len(docs),
              "epochs": args.epochs, "seed": args.seed, "learning_rate": args.lr,
              "layout_version": LAYOUT_VERSION, "training_antepre": history}
    _write_json(report, args.report or f"{args.out}.report.json")
    return report


def dump_scores(docs, kb, path):
    """TSV: doc, anaphor, antecedent, then the 18 knowledge dims."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\t".join(["doc", "u", "v", *DIM_NAMES]) + "\n")
        for doc in docs:
            for u in doc.mentions:
                for v in doc.mentions[:u.idx]:
                    vec = score_pair(u, v, doc, kb)
                    fh.write("\t".join([doc.doc_id, str(u.idx), str(v.idx), *(repr(float(x)) for x in vec)]) + "\n")


def cmd_resolve(args):
    docs = _docs(args.data, args.split)
    model = ModelWeights.load(_existing(args.model, "model file"))
    kb = load_kb(_existing(args.kb, "KB directory"))
    models = {"schema" if model.with_schema else "base": model}
    preds = run_system(args.variant, docs, models, kb, tau=args.tau)
    write_predictions(preds, args.out)
    if args.dump_scores:
        dump_scores(docs, kb, args.dump_scores)
    return {"variant": args.variant, "docs": len(preds), "out": str(args.out)}


def cmd_eval(args):
    docs = _docs(args.gold, args.split)
    preds = read_predictions(_existing(args.pred, "prediction file"))
    metrics = tuple(m.strip() for m in args.metrics.split(",") if m.strip())
    if args.split not in (None, "all"):
        keep = {d.doc_id for d in docs}
        preds = [p for p in preds if p.doc_id in keep]
    report = evaluate(docs, preds, metrics)
    if args.json:
        dump_report(report, args.json)
    print(format_report(report))
    return None


def _antepre_row(docs, preds):
    a = antepre_counts(docs, preds)
    return {"antepre": a.value, "correct": a.correct, "total": a.total}


def ablation_table(docs, kb, variant, masks, epochs=10, seed=0, lr=1.0, tau=DEFAULT_TAU,
                   train_split="train", split=None):
    """AntePre per knowledge mask, overall and per category.

    Each row trains the variant's model with only the mask's dims active and
    decodes with the same mask. Category rows partition the overall counts.
    """
    train = split_docs(docs, None if train_split == "all" else train_split)
    test = split_docs(docs, None if split == "all" else split)
    if not train:
        raise CliError(f"no training documents in split {train_split!r}")
    with_schema = SYSTEMS[variant][0]
    rows = []
    for name in masks:
        mask = ABLATION_MASKS[name]
        model = _train(train, kb, variant, epochs, seed, lr, mask=mask)
        preds = run_system(variant, test, {"schema" if with_schema else "base": model}, kb, tau=tau, mask=mask)
        by_id = {p.doc_id: p for p in preds}
        row = {"mask": name, "all": _antepre_row(test, preds)}
        for cat in CATEGORIES:
            sub = [d for d in test if d.category == cat]
            if sub:
                row[cat] = _antepre_row(sub, [by_id[d.doc_id] for d in sub])
        rows.append(row)
    return rows


def format_ablation(rows):
    cols = ["all"] + [c for c in CATEGORIES if any(c in r for r in rows)]
    lines = [f"{'mask':<8}" + "".join(f"{c:>20}" for c in cols)]
    for r in rows:
        cells = []
        for c in cols:
            cell = r.get(c)
            cells.append(f"{cell['antepre'] * 100:7.2f} ({cell['correct']}/{cell['total']})" if cell else "-")
        lines.append(f"{r['mask']:<8}" + "".join(f"{c:>20}" for c in cells))
    return "\n".join(lines)


def cmd_ablate(args):
    docs = _docs(args.data)
    if not any(d.category for d in docs):
        raise CliError("ablation needs documents with category labels")
    kb = load_kb(_existing(args.kb, "KB directory"))
    masks = ["all", "type1", "type2", "none"] if args.by == "schema-type" else [args.mask]
    rows = ablation_table(docs, kb, args.variant, masks, args.epochs, args.seed, args.lr, args.tau,
                          args.train_split, args.split)
    if args.json:
        _write_json({"variant": args.variant, "by": args.by, "rows": rows}, args.json)
    print(format_ablation(rows))
    return None


def cmd_stats(args):
    return dataset_stats(_docs(args.data, args.split)).as_dict()


def required_queries(docs):
    """Every web query the scorer may issue for pronoun/candidate pairs."""
    queries = set()
    for doc in docs:
        ctx = doc_context(doc)
        for u in doc.mentions:
            ta = ctx.triple(u.idx)
            if not u.pronoun or ta is None:
                continue
            for v in doc.mentions[:u.idx]:
                for group in web_queries(v.head_lemma, ta.pred, ta.arg, ta.arg_pos).values():
                    queries.update(group)
    return queries


def cmd_cache_fill(args):
    docs = _docs(args.data)
    cache = WebCache.load(_existing(args.cache, "web cache")) if args.cache else WebCache()
    queries = required_queries(docs)
    cache.dump(args.out, extra_keys=queries)
    missing = sorted(q for q in queries if cache.get(q) is None)
    return {"queries": len(queries), "cached": len(queries) - len(missing), "missing": len(missing)}


COMMANDS = {
    "build-kb": cmd_build_kb,
    "train": cmd_train,
    "resolve": cmd_resolve,
    "eval": cmd_eval,
    "ablate": cmd_ablate,
    "stats": cmd_stats,
    "cache-fill": cmd_cache_fill,
}

_HANDLED = (CliError, CorpusError, KBError, ModelError, EvalError, InfeasibleConstraints, OSError, ValueError)


def error_record(exc):
    rec = {"error": type(exc).__name__, "message": str(exc)}
    for attr in ("line", "doc_id"):
        if getattr(exc, attr, None) is not None:
            rec[attr] = getattr(exc, attr)
    return rec


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        merge_options(args, load_config(args.config))
        result = COMMANDS[args.command](args)
    except _HANDLED as exc:
        print(json.dumps(error_record(exc), sort_keys=True), file=sys.stderr)
        return 1
    if result is not None:
        print(json.dumps(result, indent=1, sort_keys=True, default=_jsonable))
    return 0


def _jsonable(x):
    if isinstance(x, (np.integer, np.floating)):
        return x.item()
    return str(x)


if __name__ == "__main__":
    sys.exit(main())
