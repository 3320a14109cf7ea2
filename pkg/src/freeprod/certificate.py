"""Commensurability certificates and their verification.

Wire format (JSON)::

    {"base": expr,
     "steps": [{"degree": d,
                "factors": [{"index": j, "perms": [[...], ...]}, ...],
                "result": expr}, ...],
     "final": expr}

``index`` refers to the canonical factor order of the presentation current
before the step (the base, or the previous step's ``result``).  ``perms``
lists the image arrays of all generators of that factor, free generators
first.  Factors missing from ``factors`` act trivially.  A witness file is
``{"left": cert, "right": cert}``.

The verifier trusts nothing in the certificate: it recomputes every Kurosh
decomposition from the permutations using only the action engine and the
Euler characteristic, and never calls the cover builders.
"""

from dataclasses import dataclass, field
from math import prod

from .actions import CoverAction, local_factors, validate
from .core import Z, chi, classify, normalize_counts
from .errors import InputError, SchemaError
from .parser import format_group, parse_group


@dataclass(frozen=True)
class CertStep:
    degree: int
    factors: tuple  # ((index, perms), ...)
    result: str

    def to_json(self):
        return {
            "degree": self.degree,
            "factors": [{"index": j, "perms": [list(p) for p in perms]} for j, perms in self.factors],
            "result": self.result,
        }


@dataclass(frozen=True)
class Certificate:
    base: str
    steps: tuple
    final: str

    def to_json(self):
        return {"base": self.base, "steps": [s.to_json() for s in self.steps], "final": self.final}

    @classmethod
    def from_json(cls, obj):
        _expect(isinstance(obj, dict), "certificate must be an object")
        _expect(isinstance(obj.get("base"), str), "'base' must be a string")
        _expect(isinstance(obj.get("final"), str), "'final' must be a string")
        _expect(isinstance(obj.get("steps"), list), "'steps' must be a list")
        return cls(obj["base"], tuple(step_from_json(s, k + 1) for k, s in enumerate(obj["steps"])), obj["final"])


@dataclass(frozen=True)
class WitnessCertificate:
    left: Certificate
    right: Certificate

    def to_json(self):
        return {"left": self.left.to_json(), "right": self.right.to_json()}

    @classmethod
    def from_json(cls, obj):
        _expect(isinstance(obj, dict) and "left" in obj and "right" in obj,
                "witness must be an object with 'left' and 'right'")
        return cls(Certificate.from_json(obj["left"]), Certificate.from_json(obj["right"]))


def _expect(cond, message):
    if not cond:
        raise SchemaError(message)


def _is_uint(x):
    return isinstance(x, int) and not isinstance(x, bool) and x >= 0


def step_from_json(obj, k):
    where = f"step {k}"
    _expect(isinstance(obj, dict), f"{where}: must be an object")
    _expect(_is_uint(obj.get("degree")), f"{where}: 'degree' must be a non-negative integer")
    _expect(isinstance(obj.get("result"), str), f"{where}: 'result' must be a string")
    factors = obj.get("factors", [])
    _expect(isinstance(factors, list), f"{where}: 'factors' must be a list")
    interned = {}  # equal permutations share one object, so per-action work is reused
    out = []
    for entry in factors:
        _expect(isinstance(entry, dict) and _is_uint(entry.get("index")),
                f"{where}: factor entries need a non-negative integer 'index'")
        perms = entry.get("perms")
        _expect(isinstance(perms, list) and all(isinstance(p, list) and all(_is_uint(x) for x in p) for p in perms),
                f"{where}: 'perms' must be a list of lists of non-negative integers")
        perms = tuple(interned.setdefault(t, t) for t in map(tuple, perms))
        out.append((entry["index"], perms))
    return CertStep(obj["degree"], tuple(out), obj["result"])


def load(obj):
    """Parse a loaded JSON document as a witness or a single certificate."""
    if isinstance(obj, dict) and "left" in obj:
        return WitnessCertificate.from_json(obj)
    return Certificate.from_json(obj)


def certificate_from_chain(chain):
    steps = []
    for cover, result in zip(chain.steps, chain.results):
        moving = cover.moving_factors()
        factors = tuple((j, cover.actions[j].perms) for j in moving)
        steps.append(CertStep(cover.degree, factors, format_group(result)))
    return Certificate(format_group(chain.base), tuple(steps), format_group(chain.final))


def witness_certificate(left, right):
    return WitnessCertificate(certificate_from_chain(left), certificate_from_chain(right))


@dataclass(frozen=True)
class Report:
    ok: bool
    step: int = None  # 1-based step number; None for base/final/witness level
    reason: str = ""
    side: str = None
    detail: str = ""
    index: tuple = field(default=())
    final: str = None

    def __str__(self):
        if self.ok:
            return "ok"
        where = []
        if self.side:
            where.append(self.side)
        if self.step is not None:
            where.append(f"step {self.step}")
        elif self.reason == "presentation mismatch":
            where.append("final")
        text = (" ".join(where) + ": " if where else "") + self.reason
        return f"{text} ({self.detail})" if self.detail else text

    def to_json(self):
        out = {"ok": self.ok}
        if self.ok:
            out["index"] = list(self.index)
            out["final"] = self.final
        else:
            out["message"] = str(self)
            out["reason"] = self.reason
            if self.step is not None:
                out["step"] = self.step
            if self.side:
                out["side"] = self.side
        return out


_VIOLATION_REASON = {
    "malformed": "malformed permutation",
    "shape": "wrong generator count",
    "non_commuting": "non-commuting generators",
    "order": "torsion order violated",
    "intransitive": "intransitive",
}


def _parse(text):
    try:
        return parse_group(text)
    except InputError as exc:
        return exc


def _kurosh(cover):
    """Kurosh decomposition recomputed from orbits, stabilizers and the cycle rank."""
    m, d = len(cover.base), cover.degree
    pairs, total = local_factors(cover)
    return normalize_counts(pairs + [(Z, (m - 1) * d - total + 1)])


def verify_certificate(cert):
    """Recheck every step of a certificate; returns a :class:`Report`."""
    current = _parse(cert.base)
    if isinstance(current, Exception):
        return Report(False, reason="unparsable base", detail=str(current))
    degrees = []
    for k, step in enumerate(cert.steps, start=1):
        claimed = _parse(step.result)
        if isinstance(claimed, Exception):
            return Report(False, k, "unparsable result", detail=str(claimed))
        d = step.degree
        if d < 1:
            return Report(False, k, "malformed degree", detail=f"degree {d}")
        if chi(claimed) != d * chi(current):
            return Report(False, k, "chi mismatch",
                          detail=f"chi(result) = {chi(claimed)}, degree * chi(previous) = {d * chi(current)}")
        perms = {}
        for j, ps in step.factors:
            if j >= len(current):
                return Report(False, k, "factor index out of range", detail=f"index {j}")
            if j in perms:
                return Report(False, k, "duplicate factor index", detail=f"index {j}")
            perms[j] = ps
        cover = CoverAction.from_perms(current, d, perms)
        violation = validate(cover)
        if violation is not None:
            return Report(False, k, _VIOLATION_REASON[violation.kind], detail=str(violation))
        actual = _kurosh(cover)
        if actual != claimed:
            return Report(False, k, "presentation mismatch",
                          detail=f"claimed {format_group(claimed)}, computed {format_group(actual)}")
        current = claimed
        degrees.append(d)
    final = _parse(cert.final)
    if isinstance(final, Exception):
        return Report(False, reason="unparsable final", detail=str(final))
    if final != current:
        return Report(False, reason="presentation mismatch",
                      detail=f"claimed final {format_group(final)}, chain ends at {format_group(current)}")
    return Report(True, index=(prod(degrees),), final=format_group(final))


def verify_witness(w):
    """Verify both chains, equal base classes and equal finals."""
    reports = {}
    for side, cert in (("left", w.left), ("right", w.right)):
        r = verify_certificate(cert)
        if not r.ok:
            return Report(False, r.step, r.reason, side, r.detail)
        reports[side] = r
    c1, c2 = classify(parse_group(w.left.base)), classify(parse_group(w.right.base))
    if c1 != c2:
        return Report(False, reason="class mismatch", detail=f"{c1} vs {c2}")
    if reports["left"].final != reports["right"].final:
        return Report(False, reason="finals differ",
                      detail=f"{reports['left'].final} vs {reports['right'].final}")
    return Report(True, index=reports["left"].index + reports["right"].index, final=reports["left"].final)
