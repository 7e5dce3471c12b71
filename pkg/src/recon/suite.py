"""Theorem suites over the corpus, tallied per theorem with counterexamples kept in full."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .config import budget as _budget
from .corpus import Instance, canonical_instances, steinberg_instances
from .domination import check_domination_laws, check_domination_lemma, check_prec_compact_containment
from .groupoid import GroupoidError, pair, validate_groupoid
from .io import overall_status
from .laws import check_algebraic_laws
from .normalisers import (
    check_centre_identities,
    check_effective_collapse,
    check_R_formula,
    check_RZC,
    check_RZS,
    check_sandwich,
    m_effective_characterisation,
    steinberg_hypothesis,
)
from .pipeline import steinberg_pipeline
from .report import Report, Status
from .ultrafilters import verify_recovery


@dataclass
class Tally:
    theorem: str
    passed: int = 0
    unmet: int = 0
    unverified: int = 0
    failed: int = 0
    counterexamples: list = field(default_factory=list)

    def record(self, instance: str, report: Report, clauses: Iterable[str] | None = None) -> None:
        cl = [c for c in report.clauses if clauses is None or c.name in clauses]
        if not cl:
            return
        status = overall_status(Report(report.title, cl))
        if status == "pass":
            self.passed += 1
        elif status == "hypothesis-unmet":
            self.unmet += 1
        elif status == "not-verified":
            self.unverified += 1
        else:
            self.failed += 1
            self.counterexamples.append({"instance": instance,
                                         "clauses": [c.to_dict() for c in cl if c.status is Status.FAIL]})

    def to_dict(self) -> dict:
        return {"theorem": self.theorem, "pass": self.passed, "hypothesis-unmet": self.unmet,
                "not-verified": self.unverified, "fail": self.failed, "counterexamples": self.counterexamples}


def _run(tallies: dict[str, Tally], name: str, inst: Instance, fn: Callable[[], Report],
         clauses: Iterable[str] | None = None) -> Report:
    rep = fn()
    tallies.setdefault(name, Tally(name)).record(inst.name, rep, clauses)
    return rep


def recovery_suite(instances: list[Instance], tallies: dict[str, Tally]) -> None:
    for inst in instances:
        rep = verify_recovery(inst.family)
        main = [c.name for c in rep.clauses if not c.name.startswith("oracle")]
        tallies.setdefault("reconstruction", Tally("reconstruction")).record(inst.name, rep, main)
        if "oracle: gen == subsets" in rep:
            tallies.setdefault("ultrafilter oracle", Tally("ultrafilter oracle")).record(
                inst.name, rep, ["oracle: gen == subsets"])


def domination_suite(instances: list[Instance], tallies: dict[str, Tally], max_s: int = 60,
                     laws_max_s: int = 25) -> None:
    for inst in instances:
        F = inst.family
        if len(F.S) <= max_s:
            _run(tallies, "domination lemma", inst, lambda: check_domination_lemma(F, budget=max(max_s, 1)))
            _run(tallies, "prec = containment", inst, lambda: check_prec_compact_containment(F))
            _run(tallies, "algebraic laws", inst, lambda: check_algebraic_laws(F, assoc_max=max_s))
        if len(F.S) <= laws_max_s:
            _run(tallies, "domination laws", inst, lambda: check_domination_laws(F, budget=laws_max_s))


def normaliser_suite(instances: list[Instance], tallies: dict[str, Tally], max_k: int) -> None:
    for inst in instances:
        F = inst.family
        if F.k > max_k:
            for name in ("sandwich", "centre identities", "effective collapse", "M characterisation"):
                tallies.setdefault(name, Tally(name)).unverified += 1
            continue
        _run(tallies, "sandwich", inst, lambda: check_sandwich(F))
        _run(tallies, "centre identities", inst, lambda: check_centre_identities(F))
        _run(tallies, "effective collapse", inst, lambda: check_effective_collapse(F))
        rep = m_effective_characterisation(F)
        clauses = [c.name for c in rep.clauses if c.name != "hypothesis: effective"]
        tallies.setdefault("M characterisation", Tally("M characterisation")).record(inst.name, rep, clauses)


def regularity_suite(instances: list[Instance], tallies: dict[str, Tally], max_k: int) -> None:
    for inst in instances:
        F = inst.family
        if F.k > max_k:
            for name in ("R = S^R_Z", "N^R_Z <= S", "R formula"):
                tallies.setdefault(name, Tally(name)).unverified += 1
            continue
        _run(tallies, "R = S^R_Z", inst, lambda: check_RZS(F))
        _run(tallies, "N^R_Z <= S", inst, lambda: check_RZC(F))
        _run(tallies, "R formula", inst, lambda: check_R_formula(F))
        if F.space.ring is not None and F.mode == "convolution":
            rep = steinberg_hypothesis(F)
            chain = [c.name for c in rep.clauses if c.name.startswith("chain")]
            tallies.setdefault("isotropy chain", Tally("isotropy chain")).record(inst.name, rep, chain or None)


def pipeline_suite(instances: list[Instance], tallies: dict[str, Tally]) -> None:
    """Identity maps through the pipeline; a recovered map must be the identity."""
    for inst in instances:
        F = inst.family
        rep = steinberg_pipeline(F, F, np.arange(F.k))
        if "isomorphism" in rep.data:
            ok = all(a == b for a, b in rep.data["isomorphism"].items())
            rep.add("identity recovered", ok)
        tallies.setdefault("pipeline", Tally("pipeline")).record(inst.name, rep)


def mutation_probe(tallies: dict[str, Tally]) -> None:
    """Corrupt one composition entry of pair(2); the validator must produce a counterexample."""
    raw = pair(2).to_raw()
    g, h, gh = raw["compose"][1]
    raw["compose"][1] = [g, h, next(a for a in raw["arrows"] if a != gh)]
    t = tallies.setdefault("validator", Tally("validator"))
    try:
        validate_groupoid(raw)
    except GroupoidError as e:
        t.failed += 1
        t.counterexamples.append({"instance": "pair(2) with corrupted product", "axiom": e.axiom,
                                  "witness": list(e.witness)})
        return
    t.passed += 1


def run_suite(seed: int = 0, extra: int = 4, budget: int | None = None, max_s: int = 1500,
              coefficients: list[str] | None = None, mutate: bool = False,
              suites: Iterable[str] = ("recovery", "domination", "normalisers", "regularity", "pipeline")) -> dict:
    """Run the selected suites; the result is a plain dict in ``suite-report/v1`` shape (minus envelope)."""
    b = _budget(budget)
    canon = canonical_instances(seed=seed, extra=extra, max_s=max_s, coefficients=coefficients)
    stein = steinberg_instances()
    tallies: dict[str, Tally] = {}
    suites = set(suites)
    if "recovery" in suites:
        recovery_suite(canon, tallies)
    if "domination" in suites:
        domination_suite(canon + stein, tallies)
    if "normalisers" in suites:
        normaliser_suite(canon + stein, tallies, max_k=b)
    if "regularity" in suites:
        regularity_suite(canon + stein, tallies, max_k=b)
    if "pipeline" in suites:
        pipeline_suite([i for i in stein if i.family.k <= b * b], tallies)
    if mutate:
        mutation_probe(tallies)
    results = [tallies[k].to_dict() for k in sorted(tallies)]
    return {
        "seed": seed,
        "budget": b,
        "instances": {"canonical": len(canon), "steinberg": len(stein)},
        "results": results,
        "ok": all(r["fail"] == 0 for r in results),
    }
