"""Assemble the full wedge decomposition of ``X_+`` and run the verification suites.

The plus part comes from the Lefschetz bookkeeping of the motive, one cell
``S^{2m,m} ^ J_i`` per piece ``P^i(-m)``.  The minus part is the desuspended
splitting of the real locus: the sphere ``S^j`` of ``Sigma(X(R)_+)`` becomes
``S^{j-1,0}``, so ``S^{i,0}`` occurs ``n * C(g, i)`` times for ``0 <= i <= g``.
"""

from __future__ import annotations

import json
import random
import re
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterable, Union

from .correspondence import (
    CorrAlgebra,
    dm_projectors,
    pontryagin,
    substitute_power,
    verify_dm,
)
from .exact import (
    IntMatrix,
    TruncatedPoly,
    binomial,
    poly_exp,
    poly_log1p,
    poly_mul,
    smith_normal_form,
)
from .motives import (
    PlusPartCell,
    expected_piece_count,
    hard_lefschetz_pairs,
    kunnemann_decompose,
    plus_part_cells,
    primitive_rank,
    primitive_ranks_by_recursion,
    rank_conservation,
)
from .real_locus import (
    CMFieldData,
    IncompleteInputError,
    all_components_connected_iff,
    component_count,
    cyclotomic_cm_data,
    gamma_possibilities,
    quadratic_cm_data,
)
from .results import CheckResult
from .topology import certify_splitting, real_points_splitting

SCHEMA_VERSION = 1


class InputError(ValueError):
    pass


class CoefficientError(ValueError):
    """Coefficients do not invert ``(2g)!``; ``fallback`` holds the integral splitting."""

    def __init__(self, message: str, fallback: "SplittingExpression"):
        super().__init__(message)
        self.fallback = fallback


class NoSplittingClaimed(ValueError):
    pass


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p ** 0.5) + 1))


def primes_up_to(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if _is_prime(p)]


@dataclass(frozen=True)
class CoefficientRing:
    """``Z[1/S]`` for a finite set of primes ``S``, or ``Q``."""

    inverted_primes: frozenset[int] = frozenset()
    rational: bool = False

    def __post_init__(self):
        object.__setattr__(self, "inverted_primes", frozenset(self.inverted_primes))
        bad = [p for p in self.inverted_primes if not _is_prime(p)]
        if bad:
            raise InputError(f"not prime: {sorted(bad)}")

    @classmethod
    def integers(cls) -> "CoefficientRing":
        return cls()

    @classmethod
    def rationals(cls) -> "CoefficientRing":
        return cls(rational=True)

    @classmethod
    def inverting(cls, *elements: int) -> "CoefficientRing":
        """Invert the given integers, i.e. all their prime factors."""
        primes = set()
        for x in elements:
            x = abs(int(x))
            if x == 0:
                raise InputError("cannot invert 0")
            for p in primes_up_to(x):
                if x % p == 0:
                    primes.add(p)
        return cls(frozenset(primes))

    @classmethod
    def parse(cls, text: str) -> "CoefficientRing":
        s = text.replace(" ", "").replace("ℤ", "Z").replace("ℚ", "Q")
        if s == "Q":
            return cls.rationals()
        if s == "Z":
            return cls.integers()
        m = re.fullmatch(r"Z\[(.*)\]", s)
        if not m:
            raise InputError(f"cannot parse coefficient ring {text!r}")
        dens = []
        for part in m.group(1).split(","):
            mm = re.fullmatch(r"1/(\d+)", part)
            if not mm:
                raise InputError(f"cannot parse {part!r} in {text!r}")
            dens.append(int(mm.group(1)))
        return cls.inverting(*dens)

    def inverts(self, p: int) -> bool:
        return self.rational or p in self.inverted_primes

    @property
    def label(self) -> str:
        if self.rational:
            return "Q"
        if not self.inverted_primes:
            return "Z"
        return "Z[" + ",".join(f"1/{p}" for p in sorted(self.inverted_primes)) + "]"


def check_coefficients(ring: CoefficientRing, g: int) -> CheckResult:
    """Pass iff 2 and every prime up to ``2g`` are inverted, i.e. ``(2g)!`` is a unit."""
    needed = sorted(set(primes_up_to(2 * g)) | {2})
    missing = [p for p in needed if not ring.inverts(p)]
    return CheckResult(
        "coefficients",
        not missing,
        {"lambda": ring.label, "required_primes": needed, "missing_primes": missing},
    )


# ---------------------------------------------------------------------------
# inputs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExplicitCount:
    n: int


@dataclass(frozen=True)
class QuadraticLocus:
    d: int
    epsilon: int | None = None


@dataclass(frozen=True)
class CyclotomicLocus:
    k: int
    epsilon: int | None = None


@dataclass(frozen=True)
class ExplicitCM:
    data: CMFieldData


RealLocusInput = Union[ExplicitCount, QuadraticLocus, CyclotomicLocus, ExplicitCM]


@dataclass(frozen=True)
class VarietyInput:
    g: int
    real_locus: RealLocusInput
    coefficient_ring: CoefficientRing
    rational_point: bool = True

    def __post_init__(self):
        if self.g < 1:
            raise InputError("g must be at least 1")
        if isinstance(self.real_locus, ExplicitCount):
            n = self.real_locus.n
            if n < 1 or n & (n - 1):
                raise InputError(f"component count must be a power of 2, got {n}")
            if n > 2 ** self.g:
                raise InputError(f"component count {n} exceeds 2^g = {2 ** self.g}")


def cm_data_for(v: VarietyInput, *, require_epsilon: bool = True) -> CMFieldData | None:
    loc = v.real_locus
    if isinstance(loc, ExplicitCount):
        return None
    if isinstance(loc, QuadraticLocus):
        data = quadratic_cm_data(loc.d, loc.epsilon, require_epsilon=require_epsilon)
    elif isinstance(loc, CyclotomicLocus):
        data = cyclotomic_cm_data(loc.k, loc.epsilon, require_epsilon=require_epsilon)
    elif isinstance(loc, ExplicitCM):
        data = loc.data
    else:
        raise InputError(f"unknown real-locus specification {loc!r}")
    if data.g != v.g:
        raise InputError(f"{data.label or 'CM data'} has g = {data.g}, input says g = {v.g}")
    return data


def resolve_components(v: VarietyInput) -> int:
    """``n(X)``; raises :class:`IncompleteInputError` when an epsilon is missing."""
    data = cm_data_for(v)
    if data is None:
        return v.real_locus.n
    return component_count(data)


# ---------------------------------------------------------------------------
# splitting expressions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SplittingExpression:
    g: int
    lambda_label: str
    n_components: int | None
    plus_part: tuple[PlusPartCell, ...] = ()
    minus_part: tuple[tuple[int, int], ...] = ()  # (i, multiplicity of S^{i,0})
    integral_fallback: tuple[str, ...] | None = None
    notes: tuple[str, ...] = ()

    def structure(self) -> tuple:
        """Everything except labels and notes."""
        return (self.g, self.n_components, self.plus_part, self.minus_part, self.integral_fallback)

    def summand_count(self) -> int:
        return len(self.plus_part) + sum(m for _, m in self.minus_part)


def minus_part_spheres(g: int, n: int) -> tuple[tuple[int, int], ...]:
    """Desuspend ``Sigma(X(R)_+)``: ``S^j -> S^{j-1,0}``."""
    spheres = real_points_splitting(g, n)
    return tuple((j - 1, m) for j, m in spheres.entries.items())


def integral_top_cell(g: int, lambda_label: str = "Z") -> SplittingExpression:
    """``S^{0,0} v F v S^{2g,g}``, available over any coefficients."""
    if g < 1:
        raise InputError("g must be at least 1")
    return SplittingExpression(
        g, lambda_label, None,
        integral_fallback=("S^{0,0}", "F", f"S^{{{2 * g},{g}}}"),
        notes=("top cell split off integrally; F is not decomposed further",),
    )


def assemble_splitting(v: VarietyInput) -> SplittingExpression:
    if not v.rational_point:
        raise NoSplittingClaimed("no rational point asserted: no splitting claimed")
    coeff = check_coefficients(v.coefficient_ring, v.g)
    if not coeff.passed:
        missing = coeff.details["missing_primes"]
        raise CoefficientError(
            f"(2g)! = {factorial(2 * v.g)} is not invertible in {v.coefficient_ring.label}; "
            f"missing primes {missing}",
            integral_top_cell(v.g, v.coefficient_ring.label),
        )
    n = resolve_components(v)
    plus = tuple(sorted(plus_part_cells(kunnemann_decompose(v.g))))
    notes = []
    if isinstance(v.real_locus, ExplicitCount):
        notes.append("minus part assumes X(R) is a disjoint union of n real g-tori")
    if v.coefficient_ring.rational:
        notes.append("J_i for i >= 2 depends on J_1; the dependency is recorded, not computed")
    return SplittingExpression(
        v.g, v.coefficient_ring.label, n, plus, minus_part_spheres(v.g, n), None, tuple(notes)
    )


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

WEDGE = " ∨ "


def _cell_token(c: PlusPartCell) -> str:
    if c.j_index == 0:
        return f"S^{{{c.p},{c.q}}}"
    if c.q == 0:
        return f"J_{c.j_index}"
    return f"S^{{{c.p},{c.q}}} ∧ J_{c.j_index}"


def render_text(e: SplittingExpression) -> str:
    if e.integral_fallback is not None:
        return WEDGE.join(e.integral_fallback)
    parts = [_cell_token(c) for c in e.plus_part]
    n = e.n_components
    inner = []
    for i, mult in e.minus_part:
        per_copy, rem = divmod(mult, n)
        if rem:
            raise ValueError(f"multiplicity {mult} of S^{{{i},0}} is not a multiple of n = {n}")
        token = f"S^{{{i},0}}"
        inner.append(token if per_copy == 1 else f"{per_copy}×{token}")
    parts.append(f"{n}×(" + WEDGE.join(inner) + ")")
    return WEDGE.join(parts)


def to_json_dict(e: SplittingExpression, verification: dict | None = None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "g": e.g,
        "lambda": e.lambda_label,
        "n_components": e.n_components,
        "plus_part": [{"p": c.p, "q": c.q, "j_index": c.j_index} for c in e.plus_part],
        "minus_part": [{"i": i, "multiplicity": m} for i, m in e.minus_part],
        "integral_fallback": list(e.integral_fallback) if e.integral_fallback is not None else None,
        "notes": list(e.notes),
        "verification": dict(verification or {}),
    }


def render(e: SplittingExpression, fmt: str = "text", verification: dict | None = None) -> str:
    if fmt == "text":
        return render_text(e)
    if fmt == "json":
        return json.dumps(to_json_dict(e, verification), indent=2, ensure_ascii=False)
    raise ValueError(f"unknown format {fmt!r}")


def from_json_dict(doc: dict) -> SplittingExpression:
    fb = doc.get("integral_fallback")
    return SplittingExpression(
        g=int(doc["g"]),
        lambda_label=str(doc["lambda"]),
        n_components=doc["n_components"],
        plus_part=tuple(PlusPartCell(c["p"], c["q"], c["j_index"]) for c in doc["plus_part"]),
        minus_part=tuple((m["i"], m["multiplicity"]) for m in doc["minus_part"]),
        integral_fallback=tuple(fb) if fb is not None else None,
        notes=tuple(doc.get("notes", ())),
    )


def _split_top(text: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "∨" and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur).strip())
    return [t for t in out if t]


_SPHERE = r"S\^\{(\d+),(\d+)\}"


def parse_text(text: str, lambda_label: str = "") -> SplittingExpression:
    """Inverse of :func:`render_text` up to labels and notes."""
    tokens = _split_top(text)
    if "F" in tokens:
        m = re.fullmatch(_SPHERE, tokens[-1])
        if len(tokens) != 3 or tokens[0] != "S^{0,0}" or not m:
            raise ValueError(f"malformed integral splitting {text!r}")
        g = int(m.group(2))
        return SplittingExpression(g, lambda_label, None, integral_fallback=tuple(tokens),
                                   notes=integral_top_cell(g).notes)
    plus, minus, n = [], (), None
    for tok in tokens:
        if m := re.fullmatch(r"(\d+)×\((.*)\)", tok):
            n = int(m.group(1))
            spheres = []
            for inner in _split_top(m.group(2)):
                mm = re.fullmatch(r"(?:(\d+)×)?S\^\{(\d+),0\}", inner)
                if not mm:
                    raise ValueError(f"bad minus-part token {inner!r}")
                spheres.append((int(mm.group(2)), n * int(mm.group(1) or 1)))
            minus = tuple(spheres)
        elif m := re.fullmatch(_SPHERE, tok):
            plus.append(PlusPartCell(int(m.group(1)), int(m.group(2)), 0))
        elif m := re.fullmatch(r"J_(\d+)", tok):
            plus.append(PlusPartCell(0, 0, int(m.group(1))))
        elif m := re.fullmatch(_SPHERE + r" ∧ J_(\d+)", tok):
            plus.append(PlusPartCell(int(m.group(1)), int(m.group(2)), int(m.group(3))))
        else:
            raise ValueError(f"unrecognised token {tok!r}")
    if n is None:
        raise ValueError("missing minus part")
    g = max(i for i, _ in minus)
    return SplittingExpression(g, lambda_label, n, tuple(sorted(plus)), minus)


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------


@dataclass
class SuiteResult:
    name: str
    status: str  # "pass" | "fail" | "skip"
    runtime_s: float
    details: dict = field(default_factory=dict)


@dataclass
class Report:
    g: int
    lambda_label: str
    n_components: int | None
    depth: str
    seed: int
    suites: dict[str, SuiteResult] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(s.status != "fail" for s in self.suites.values())

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def statuses(self) -> dict[str, str]:
        return {name: s.status for name, s in self.suites.items()}

    def to_dict(self) -> dict:
        return {
            "g": self.g,
            "lambda": self.lambda_label,
            "n_components": self.n_components,
            "depth": self.depth,
            "seed": self.seed,
            "passed": self.passed,
            "verification": self.statuses(),
            "suites": {
                name: {"status": s.status, "runtime_s": round(s.runtime_s, 6), "details": s.details}
                for name, s in self.suites.items()
            },
        }


DEPTHS = {
    "quick": {"n_range": range(-2, 4), "random_trials": 10},
    "full": {"n_range": range(-3, 4), "random_trials": 40},
}


def _random_poly(rng: random.Random, order: int, nilpotent: bool = False) -> TruncatedPoly:
    cs = [Fraction(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(order + 1)]
    if nilpotent:
        cs[0] = Fraction(0)
    return TruncatedPoly(order, tuple(cs))


def _property_suite(g: int, trials: int, rng: random.Random) -> CheckResult:
    failures = []
    order = 2 * g
    alg = CorrAlgebra(g)
    for t in range(trials):
        a, b, c = (_random_poly(rng, order) for _ in range(3))
        if poly_mul(poly_mul(a, b), c) != poly_mul(a, poly_mul(b, c)) or poly_mul(a, b) != poly_mul(b, a):
            failures.append(f"trial {t}: product not associative/commutative")
        q = _random_poly(rng, order, nilpotent=True)
        one = TruncatedPoly.constant(order)
        if poly_exp(poly_log1p(q)) != one + q or poly_log1p(poly_exp(q) - one) != q:
            failures.append(f"trial {t}: exp/log round trip failed")
        n = rng.randint(-3, 3)
        ea, eb = alg.element(a.coeffs), alg.element(b.coeffs)
        if substitute_power(pontryagin(ea, eb), n) != pontryagin(substitute_power(ea, n), substitute_power(eb, n)):
            failures.append(f"trial {t}: substitution by {n} is not multiplicative")
        rows, cols = rng.randint(1, 6), rng.randint(1, 6)
        m = IntMatrix(rows, cols, tuple(rng.randint(-20, 20) for _ in range(rows * cols)))
        u, d, v = smith_normal_form(m)
        diag = d.diagonal()
        nz = [x for x in diag if x]
        off_diag = any(d[i, j] for i in range(rows) for j in range(cols) if i != j)
        chain = all(nz[k + 1] % nz[k] == 0 for k in range(len(nz) - 1)) and diag[: len(nz)] == nz
        if u @ m @ v != d or off_diag or not chain:
            failures.append(f"trial {t}: Smith form check failed on {m.to_rows()}")
    return CheckResult("properties", not failures, {"trials": trials, "failures": failures})


def corrupt_family(g: int, index: int):
    """Projector family with ``pi_index`` replaced by ``pi_index + pi_other``."""
    fam = dm_projectors(CorrAlgebra(g))
    top = 2 * g
    if not 0 <= index <= top:
        raise InputError(f"projector index {index} outside 0..{top}")
    other = index - 1 if index > 0 else index + 1
    return fam.replace(index, fam[index] + fam[other])


def verify_all(v: VarietyInput, depth: str = "full", seed: int = 0,
               corrupt_projector: int | None = None) -> Report:
    """Run every suite; a suite failure never raises, it is recorded."""
    if depth not in DEPTHS:
        raise InputError(f"depth must be one of {sorted(DEPTHS)}")
    cfg = DEPTHS[depth]
    g = v.g
    try:
        n = resolve_components(v)
        n_error = None
    except (IncompleteInputError, ValueError) as exc:
        n, n_error = None, str(exc)
    report = Report(g, v.coefficient_ring.label, n, depth, seed)
    rng = random.Random(seed)

    def run(name, fn):
        start = time.perf_counter()
        try:
            res = fn()
            status = "pass" if res.passed else "fail"
            details = res.details
        except Exception as exc:  # a crashing suite is a failing suite
            status, details = "fail", {"error": f"{type(exc).__name__}: {exc}"}
        report.suites[name] = SuiteResult(name, status, time.perf_counter() - start, details)

    def skip(name, reason):
        report.suites[name] = SuiteResult(name, "skip", 0.0, {"reason": reason})

    run("coefficients", lambda: check_coefficients(v.coefficient_ring, g))

    def dm():
        fam = None if corrupt_projector is None else corrupt_family(g, corrupt_projector)
        r = verify_dm(CorrAlgebra(g), cfg["n_range"], fam)
        return CheckResult("deninger_murre", r.passed, r.to_dict())

    run("deninger_murre", dm)

    def ranks():
        dec = kunnemann_decompose(g)
        rc = rank_conservation(dec)
        closed = [primitive_rank(g, i) for i in range(g + 1)]
        oracle = primitive_ranks_by_recursion(g)
        cells = plus_part_cells(dec)
        ok = (rc.passed and closed == oracle and len(dec.pieces) == expected_piece_count(g)
              and len(cells) == len(dec.pieces))
        return CheckResult("motive_ranks", ok, {**rc.details, "primitive_ranks": closed,
                                                "recursion_oracle": oracle,
                                                "pieces": len(dec.pieces)})

    run("motive_ranks", ranks)

    def lefschetz():
        pairs = hard_lefschetz_pairs(g)
        return CheckResult("hard_lefschetz", all(p.matches for p in pairs),
                           {"degrees": {p.i: p.matches for p in pairs}})

    run("hard_lefschetz", lefschetz)

    def real_locus():
        if n is None:
            return CheckResult("real_locus", False, {"error": n_error})
        details = {"n": n, "power_of_two": n & (n - 1) == 0, "within_bounds": 1 <= n <= 2 ** g}
        ok = details["power_of_two"] and details["within_bounds"]
        data = cm_data_for(v)
        if data is not None:
            possible = sorted(gamma_possibilities(data))
            details["possible_counts"] = possible
            details["always_connected"] = all_components_connected_iff(data)
            ok = ok and n in possible
        return CheckResult("real_locus", ok, details)

    run("real_locus", real_locus)

    if n is None:
        skip("topology_oracle", "component count unresolved")
    else:
        run("topology_oracle", lambda: certify_splitting(g, n))

    def identities():
        coeff_ok = check_coefficients(v.coefficient_ring, g).passed
        if n is None or not coeff_ok:
            e = SplittingExpression(g, v.coefficient_ring.label, n,
                                    tuple(sorted(plus_part_cells(kunnemann_decompose(g)))),
                                    minus_part_spheres(g, n) if n else ())
        else:
            e = assemble_splitting(v)
        checks = {
            "summand_count": n is not None
            and e.summand_count() == expected_piece_count(g) + n * 2 ** g,
            "minus_part": n is not None
            and dict(e.minus_part) == {i: n * binomial(g, i) for i in range(g + 1)},
            "tate_bidegrees": all(c.p == 2 * c.q for c in e.plus_part),
            "top_and_bottom_cells": sum(1 for c in e.plus_part if c.j_index == 0 and c.q == 0) == 1
            and sum(1 for c in e.plus_part if c.j_index == 0 and c.q == g) == 1,
        }
        if g == 1 and n is not None:
            checks["elliptic_shape"] = e.plus_part == (
                PlusPartCell(0, 0, 0), PlusPartCell(0, 0, 1), PlusPartCell(2, 1, 0)
            ) and e.minus_part == ((0, n), (1, n))
        return CheckResult("splitting_identities", all(checks.values()), checks)

    run("splitting_identities", identities)
    run("properties", lambda: _property_suite(g, cfg["random_trials"], rng))
    return report
