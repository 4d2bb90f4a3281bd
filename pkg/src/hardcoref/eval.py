"""Coreference metrics: AntePre, Winograd precision, MUC, B-cubed, CEAFe.

Link- and mention-based scores are micro-averaged over documents (numerators
and denominators summed before dividing).
"""
import json
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

METRICS = ("antepre", "winograd", "muc", "bcub", "ceafe")


class EvalError(ValueError):
    pass


def _ratio(num, den):
    return num / den if den else 0.0


def f1(p, r):
    return 2 * p * r / (p + r) if p + r else 0.0


@dataclass(frozen=True)
class PRF:
    p_num: float
    p_den: float
    r_num: float
    r_den: float

    @property
    def precision(self):
        return _ratio(self.p_num, self.p_den)

    @property
    def recall(self):
        return _ratio(self.r_num, self.r_den)

    @property
    def f1(self):
        return f1(self.precision, self.recall)

    def __add__(self, other):
        return PRF(self.p_num + other.p_num, self.p_den + other.p_den,
                   self.r_num + other.r_num, self.r_den + other.r_den)

    def as_dict(self):
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1}


def clusters_from_ids(ids):
    """{mention: cluster id} -> list of frozensets."""
    groups = {}
    for m, c in ids.items():
        groups.setdefault(c, set()).add(m)
    return [frozenset(g) for g in groups.values()]


def check_partition(clusters):
    seen = set()
    for c in clusters:
        if seen & c:
            raise EvalError(f"overlapping clusters at mentions {sorted(seen & c)}")
        seen |= c
    return seen


def _muc_side(keys, responses):
    where = {}
    for k, r in enumerate(responses):
        for m in r:
            where[m] = k
    num = den = 0
    for key in keys:
        parts = {where.get(m, ("single", m)) for m in key}
        num += len(key) - len(parts)
        den += len(key) - 1
    return num, den


def muc_counts(gold, pred):
    check_partition(gold)
    check_partition(pred)
    r_num, r_den = _muc_side(gold, pred)
    p_num, p_den = _muc_side(pred, gold)
    return PRF(p_num, p_den, r_num, r_den)


def _bcub_side(keys, responses):
    where = {}
    for r in responses:
        for m in r:
            where[m] = r
    total = 0.0
    n = 0
    for key in keys:
        for m in key:
            total += len(key & where.get(m, frozenset([m]))) / len(key)
            n += 1
    return total, n


def bcub_counts(gold, pred):
    check_partition(gold)
    check_partition(pred)
    r_num, r_den = _bcub_side(gold, pred)
    p_num, p_den = _bcub_side(pred, gold)
    return PRF(p_num, p_den, r_num, r_den)


def phi4(k, r):
    return 2 * len(k & r) / (len(k) + len(r))


def ceafe_counts(gold, pred):
    check_partition(gold)
    check_partition(pred)
    if not gold or not pred:
        return PRF(0.0, len(pred), 0.0, len(gold))
    sim = np.array([[phi4(k, r) for r in pred] for k in gold])
    rows, cols = linear_sum_assignment(sim, maximize=True)
    total = float(sim[rows, cols].sum())
    return PRF(total, len(pred), total, len(gold))


def _doc_clusters(doc, pred):
    gold = clusters_from_ids(doc.gold_clusters)
    return gold, [frozenset(c) for c in pred.clusters]


def _paired(docs, preds):
    by_id = {p.doc_id: p for p in preds}
    for doc in docs:
        p = by_id.get(doc.doc_id)
        if p is None:
            raise EvalError(f"no prediction for document {doc.doc_id!r}")
        if len(p.links) != len(doc.mentions):
            raise EvalError(f"{doc.doc_id}: prediction has {len(p.links)} mentions, gold {len(doc.mentions)}")
        yield doc, p


def muc(docs, preds):
    return sum((muc_counts(*_doc_clusters(d, p)) for d, p in _paired(docs, preds)), PRF(0, 0, 0, 0))


def bcub(docs, preds):
    return sum((bcub_counts(*_doc_clusters(d, p)) for d, p in _paired(docs, preds)), PRF(0, 0, 0, 0))


def ceafe(docs, preds):
    return sum((ceafe_counts(*_doc_clusters(d, p)) for d, p in _paired(docs, preds)), PRF(0, 0, 0, 0))


@dataclass
class AntePreResult:
    correct: int = 0
    total: int = 0
    excluded: list = field(default_factory=list)

    @property
    def value(self):
        return _ratio(self.correct, self.total)


def antepre_counts(docs, preds):
    """Each pronoun's gold antecedents (earlier mentions of its gold cluster)
    are binary decisions; a decision is correct when the pair shares a
    predicted cluster. Pronouns without gold antecedents are excluded."""
    res = AntePreResult()
    for doc, p in _paired(docs, preds):
        gold = doc.gold_clusters
        pred = p.cluster_ids()
        for m in doc.mentions:
            if not m.pronoun:
                continue
            antecedents = [v.idx for v in doc.mentions[:m.idx] if gold[v.idx] == gold[m.idx]]
            if not antecedents:
                res.excluded.append((doc.doc_id, m.idx))
                continue
            res.total += len(antecedents)
            res.correct += sum(pred[v] == pred[m.idx] for v in antecedents)
    return res


def antepre(docs, preds):
    return antepre_counts(docs, preds).value


def winograd_counts(docs, preds):
    """(correct, total) over target pronouns, i.e. mentions listing `cands`."""
    correct = total = 0
    for doc, p in _paired(docs, preds):
        gold = doc.gold_clusters
        pred = p.cluster_ids()
        for m in doc.mentions:
            if m.cands is None:
                continue
            if len(m.cands) != 2:
                raise EvalError(f"{doc.doc_id}: target pronoun {m.idx} has {len(m.cands)} candidates, need 2")
            right = [c for c in m.cands if gold[c] == gold[m.idx]]
            if len(right) != 1:
                raise EvalError(f"{doc.doc_id}: target pronoun {m.idx} needs exactly one correct candidate")
            wrong = [c for c in m.cands if c not in right]
            total += 1
            if pred[right[0]] == pred[m.idx] and pred[wrong[0]] != pred[m.idx]:
                correct += 1
    return correct, total


def winograd_precision(docs, preds):
    correct, total = winograd_counts(docs, preds)
    return _ratio(correct, total)


def evaluate(docs, preds, metrics=METRICS):
    """Selected metrics as a JSON-ready dict."""
    docs = list(docs)
    unknown = set(metrics) - set(METRICS)
    if unknown:
        raise EvalError(f"unknown metrics {sorted(unknown)}")
    report = {}
    if "antepre" in metrics:
        a = antepre_counts(docs, preds)
        report["antepre"] = {"value": a.value, "correct": a.correct, "total": a.total,
                             "excluded": len(a.excluded)}
    if "winograd" in metrics:
        c, t = winograd_counts(docs, preds)
        report["winograd"] = {"precision": _ratio(c, t), "correct": c, "total": t}
    f1s = []
    for name, fn in (("muc", muc), ("bcub", bcub), ("ceafe", ceafe)):
        if name in metrics:
            report[name] = fn(docs, preds).as_dict()
            f1s.append(report[name]["f1"])
    if len(f1s) == 3:
        report["avg_f1"] = sum(f1s) / 3
    return report


def format_report(report):
    """Aligned plain-text table of an evaluate() report."""
    lines = [f"{'metric':<10}{'P':>10}{'R':>10}{'F1':>10}"]
    for name in ("muc", "bcub", "ceafe"):
        if name in report:
            r = report[name]
            lines.append(f"{name:<10}{r['precision'] * 100:>10.2f}{r['recall'] * 100:>10.2f}{r['f1'] * 100:>10.2f}")
    if "avg_f1" in report:
        lines.append(f"{'avg':<10}{'':>10}{'':>10}{report['avg_f1'] * 100:>10.2f}")
    if "antepre" in report:
        a = report["antepre"]
        lines.append(f"{'antepre':<10}{a['value'] * 100:>10.2f}  ({a['correct']}/{a['total']})")
    if "winograd" in report:
        w = report["winograd"]
        lines.append(f"{'winograd':<10}{w['precision'] * 100:>10.2f}  ({w['correct']}/{w['total']})")
    return "\n".join(lines)


def dump_report(report, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=1, sort_keys=True)
        fh.write("\n")
