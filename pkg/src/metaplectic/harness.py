"""Command-line verification campaigns.

Every check draws its inputs from a per-trial generator seeded by
(seed, check name, trial index), so reports do not depend on the order
in which trials run.
"""

from __future__ import annotations

import json
import os
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

import click

from . import barthel, extended as ext, heisenberg as heis, linalg as la, rao
from .barthel import SemidirectElement
from .oracles import hilbert_grid_oracle, integer_class_rep
from .padic import (
    Cyclo,
    Mu8,
    PadicNumber,
    SquareClass,
    WrongResidueCase,
    get_context,
    hilbert_symbol,
    set_precision,
)
from .quadform import HALF_PSI, STANDARD_PSI, gamma_norm, gamma_psi, gauss_sum_oracle, snap_mu8
from .symplectic import (
    PIVOT_STRATEGIES,
    _random_invertible,
    bruhat_decompose,
    is_symplectic,
    m_of,
    omega_S,
    random_sl2,
    random_sp,
    s_of,
    x_invariant,
)


class HarnessError(Exception):
    pass


class UnknownCocycle(HarnessError):
    pass


class UnknownLemma(HarnessError):
    pass


class UnknownTable(HarnessError):
    pass


class ParseError(HarnessError):
    pass


@dataclass(frozen=True)
class RunConfig:
    p: int = 3
    m: int = 1
    precision: int = 32
    samples: int = 200
    seed: int = 0
    lemma_ids: tuple = ()

    def __post_init__(self):
        get_context(self.p)  # validates p
        if self.m < 1:
            raise ValueError("m must be positive")
        if self.samples < 1:
            raise ValueError("samples must be at least 1")

    @property
    def case(self) -> int:
        return get_context(self.p).case


@dataclass
class LemmaReport:
    lemma_id: str
    trials: int
    failures: int
    first_counterexample: Optional[object] = None
    elapsed: float = 0.0
    details: Optional[object] = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "lemma_id": self.lemma_id,
            "trials": self.trials,
            "failures": self.failures,
            "first_counterexample": self.first_counterexample,
        }
        if self.details is not None:
            out["details"] = self.details
        if timing:
            out["elapsed"] = round(self.elapsed, 3)
        return out


def trial_rng(seed: int, name: str, index: int) -> random.Random:
    return random.Random(f"{seed}/{name}/{index}")


# ---------------------------------------------------------------------------
# serialization


def serialize(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int) and not isinstance(x, bool):
        return x
    if isinstance(x, (Cyclo, PadicNumber)):
        return repr(x)
    if isinstance(x, Mu8):
        return {"mu8": x.exponent}
    if isinstance(x, SquareClass):
        return x.name
    if isinstance(x, ext.FtildeElement):
        return {"matrix": serialize(x.matrix), "eps": x.eps}
    if isinstance(x, ext.ExtSemidirect):
        return {"y": serialize(x.y), "g": serialize(x.g)}
    if isinstance(x, SemidirectElement):
        return {"y": serialize(x.y), "g": serialize(x.g)}
    if isinstance(x, heis.HeisElement):
        return {"w": serialize(x.w), "t": serialize(x.t)}
    if isinstance(x, heis.ParenElement):
        return {"h": serialize(x.h), "eps": serialize(x.eps)}
    if isinstance(x, heis.ParenGSpElement):
        return {"g": serialize(x.g), "k": serialize(x.k)}
    if isinstance(x, ext.CoveringElement):
        return {"y": serialize(x.y), "g": serialize(x.g), "eps": serialize(x.eps), "tag": x.tag}
    if isinstance(x, dict):
        return {str(k): serialize(v) for k, v in x.items()}
    if isinstance(x, (tuple, list)):
        return [serialize(v) for v in x]
    return str(x)


def parse_scalar(text: str, p: int) -> Fraction:
    """'num/den', an integer, or 'p^v*u' with u rational."""
    s = text.strip().replace(" ", "")
    try:
        if s.startswith("p^"):
            rest = s[2:]
            v, _, u = rest.partition("*")
            return Fraction(p) ** int(v) * (Fraction(u) if u else 1)
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"cannot parse scalar {text!r}") from exc


def parse_matrix(text: str, p: int) -> la.Matrix:
    try:
        rows = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"matrix is not valid JSON: {exc}") from exc
    if not isinstance(rows, list) or not rows or any(not isinstance(r, list) for r in rows):
        raise ParseError("matrix must be a non-empty array of arrays")
    n = len(rows)
    if n % 2 or any(len(r) != n for r in rows):
        raise ParseError("matrix must be square of even size")
    return la.mat([[parse_scalar(str(x), p) for x in r] for r in rows])


def format_matrix(M: la.Matrix) -> list:
    return [[str(x) for x in row] for row in M]


# ---------------------------------------------------------------------------
# cocycles


def _random_rational(rng: random.Random, p: int) -> Fraction:
    return Fraction(rng.choice([1, -1]) * rng.randint(1, 12), rng.randint(1, 6)) * Fraction(p) ** rng.randint(-2, 2)


@dataclass(frozen=True)
class CocycleSpec:
    sample: Callable
    multiply: Callable
    value: Callable
    case1_only: bool = False


def _sp_sample(rng, p, m):
    return random_sp(rng, m, 4, p)


def _barthel_sample(rng, p, m):
    return SemidirectElement(_random_rational(rng, p), random_sp(rng, m, 4, p))


COCYCLES: dict[str, CocycleSpec] = {
    "c_pr": CocycleSpec(_sp_sample, lambda a, b: la.mul(a, b), lambda a, b, p: rao.c_pr(a, b, p)),
    "c": CocycleSpec(_sp_sample, lambda a, b: la.mul(a, b), lambda a, b, p: rao.c_pm(a, b, p)),
    "C_BPR": CocycleSpec(_barthel_sample, lambda a, b: a * b, lambda a, b, p: barthel.c_bpr(a, b, p)),
    "C_B": CocycleSpec(_barthel_sample, lambda a, b: a * b, lambda a, b, p: barthel.c_b(a, b, p)),
    "C_tilde_M": CocycleSpec(
        lambda rng, p, m: ext.random_semidirect(rng, p, m, 3), lambda a, b: a * b, lambda a, b, p: ext.c_tilde_M(a, b)
    ),
    "C_bar_M": CocycleSpec(
        lambda rng, p, m: ext.random_semidirect(rng, p, m, 3), lambda a, b: a * b, lambda a, b, p: ext.c_bar_M(a, b)
    ),
    "C_ttilde_M": CocycleSpec(
        lambda rng, p, m: ext.random_semidirect(rng, p, m, 3),
        lambda a, b: a * b,
        lambda a, b, p: ext.c_ttilde_M(a, b),
        True,
    ),
    "C_bbar_M": CocycleSpec(
        lambda rng, p, m: ext.random_semidirect(rng, p, m, 3),
        lambda a, b: a * b,
        lambda a, b, p: ext.c_bbar_M(a, b),
        True,
    ),
    "C_M": CocycleSpec(
        lambda rng, p, m: ext.random_gsp_tilde(rng, p, m, 3), lambda a, b: a * b, lambda a, b, p: ext.c_M(a, b), True
    ),
    "C_bar": CocycleSpec(
        lambda rng, p, m: ext.random_gsp_tilde(rng, p, m, 3), lambda a, b: a * b, lambda a, b, p: ext.c_bar(a, b), True
    ),
}


def verify_cocycle(name: str, config: RunConfig) -> LemmaReport:
    """x(g1, g2) x(g1 g2, g3) = x(g1, g2 g3) x(g2, g3) on random triples."""
    if name not in COCYCLES:
        raise UnknownCocycle(f"unknown cocycle {name!r}; choose from {', '.join(COCYCLES)}")
    spec = COCYCLES[name]
    p, m = config.p, config.m
    if spec.case1_only and config.case != 1:
        raise WrongResidueCase(f"{name} is only defined for p = 1 mod 4")
    start = time.perf_counter()
    failures = 0
    first = None
    for i in range(config.samples):
        rng = trial_rng(config.seed, f"cocycle-{name}-{p}-{m}", i)
        g1, g2, g3 = (spec.sample(rng, p, m) for _ in range(3))
        f = spec.value
        lhs = f(g1, g2, p) * f(spec.multiply(g1, g2), g3, p)
        rhs = f(g1, spec.multiply(g2, g3), p) * f(g2, g3, p)
        if lhs != rhs:
            failures += 1
            if first is None:
                first = serialize({"g1": g1, "g2": g2, "g3": g3, "lhs": lhs, "rhs": rhs})
    return LemmaReport(f"cocycle-{name}", config.samples, failures, first, (time.perf_counter() - start) * 1000)


# ---------------------------------------------------------------------------
# lemma checks
#
# A sampled check takes (rng, p, m) and returns None on success or a dict
# describing the counterexample.  An exhaustive check takes (p, m) and
# returns (trials, failures, first counterexample, details).


@dataclass(frozen=True)
class LemmaCheck:
    description: str
    cases: tuple = (1, 3)
    sampled: Optional[Callable] = None
    exhaustive: Optional[Callable] = None


def _cex(**kw) -> dict:
    return serialize(kw)


def _check_relation(rng, p, m):
    g1, g2 = random_sp(rng, m, 4, p), random_sp(rng, m, 4, p)
    if not rao.relation_check(g1, g2, p):
        return _cex(g1=g1, g2=g2)


def _check_sl2(rng, p, m):
    g1, g2 = random_sl2(rng, p), random_sl2(rng, p)
    checks = {
        "x": rao.sl2_x(g1, p) == x_invariant(g1, p),
        "m": rao.sl2_m(g1, p) == rao.m_norm(g1, p),
        "c_pr": rao.sl2_c_pr(g1, g2, p) == rao.c_pr(g1, g2, p),
        "c": rao.sl2_c_pm(g1, g2, p) == rao.c_pm(g1, g2, p),
    }
    bad = [k for k, v in checks.items() if not v]
    if bad:
        return _cex(g1=g1, g2=g2, failed=bad)


def _check_bruhat(rng, p, m):
    g = random_sp(rng, m, 6, p)
    d = bruhat_decompose(g, p)
    xs = {s: x_invariant(g, p, s) for s in PIVOT_STRATEGIES}
    if d.reconstruct() != g or len(set(xs.values())) != 1:
        return _cex(g=g)


def _random_gl2(rng, p):
    return la.mul(s_of(_random_rational(rng, p), 1), random_sl2(rng, p))


def _check_gl2(rng, p, m):
    h1, h2 = _random_gl2(rng, p), _random_gl2(rng, p)
    direct = barthel.c_bpr(barthel.gl2_split(h1), barthel.gl2_split(h2), p)
    if barthel.gl2_c_bpr(h1, h2, p) != direct:
        return _cex(h1=h1, h2=h2)


def _check_nu2_gl2(rng, p, m):
    g1 = random_sl2(rng, p)
    y2 = _random_rational(rng, p)
    if barthel.gl2_nu2(g1, y2, p) != barthel.nu2(s_of(y2, 1), g1, p):
        return _cex(g1=g1, y2=y2)


def _check_nu_composition(rng, p, m):
    y1, y2 = ext.random_ftilde(rng, p, m), ext.random_ftilde(rng, p, m)
    g, g2 = random_sp(rng, m, 4, p), random_sp(rng, m, 4, p)
    ok = barthel.nu_compose_check(y1.matrix, y2.matrix, g, p)
    ok = ok and barthel.coboundary_check(y1.matrix, g, g2, p)
    ok = ok and barthel.coboundary_check2(y1.matrix, g, g2, p)
    if not ok:
        return _cex(y1=y1, y2=y2, g=g, g2=g2)


def _check_nu_sl2(rng, p, m):
    g = random_sl2(rng, p)
    bad = [n for n in ext.class_names(p) if barthel.nu(ext.iota_rep(n, p, 1).matrix, g, p) != ext.nu_sl2_closed(n, g, p)]
    if bad:
        return _cex(g=g, classes=bad)


def _check_nu_m_elements(rng, p, m):
    y = ext.random_ftilde(rng, p, m)
    S = tuple(i for i in range(1, m + 1) if rng.random() < 0.6)
    A = _random_invertible(rng, m, p)
    g = random_sp(rng, m, 4, p)
    g0 = m_of(A)
    nu = barthel.nu
    ok = nu(y.matrix, omega_S(S, m), p) == ext.nu_omega_closed(y, S)
    ok = ok and nu(y.matrix, g0, p) == ext.nu_levi_closed(y, A)
    ok = ok and nu(y.matrix, la.mul(g0, g), p) == nu(y.matrix, g0, p) * nu(y.matrix, g, p)
    ok = ok and nu(y.matrix, la.mul(g, g0), p) == nu(y.matrix, g, p) * nu(y.matrix, g0, p)
    if get_context(p).case == 1:
        ok = ok and nu(ext.iota_rep("z1*p", p, m).matrix, g, p) == ext.nu_diag_closed(g, p, m)
    if not ok:
        return _cex(y=y, S=S, A=A, g=g)


def _check_delta_d(rng, p, m):
    n = rng.choice([-2, -1, 1, 2])
    e1 = ext.delta_element(n, p, m)
    e2 = ext.random_semidirect(rng, p, m, 3)
    v = ext.delta_d_values(e1, e2, n)
    checks = {
        "tilde_left": ext.c_tilde_M(e1, e2) == v["tilde_left"],
        "tilde_right": ext.c_tilde_M(e2, e1) == v["tilde_right"],
        "bar_left": ext.c_bar_M(e1, e2) == v["bar_left"],
        "bar_right": ext.c_bar_M(e2, e1) == v["bar_right"],
    }
    if get_context(p).case == 1:
        checks["ttilde"] = ext.c_ttilde_M(e1, e2) == 1 and ext.c_ttilde_M(e2, e1) == 1
        checks["bbar"] = ext.c_bbar_M(e1, e2) == v["bbar"] and ext.c_bbar_M(e2, e1) == v["bbar"]
    bad = [k for k, ok in checks.items() if not ok]
    if bad:
        return _cex(n=n, e2=e2, failed=bad)


def _check_center(rng, p, m):
    r8 = ext.center_check(p, m, 1, rng)
    r2 = ext.center_check(p, m, 1, rng, two_fold=True)
    bad = r8.failures + r2.failures
    if get_context(p).case == 1:
        bad += ext.plus_trivial_check(p, m, 1, rng)
    if bad:
        return _cex(failures=bad)


def _center_witness(p, m):
    value = ext.center_witness(p, m)
    predicted = Mu8.sign(hilbert_symbol(Fraction(p), Fraction((-1) ** m), p))
    failed = value != predicted
    return 1, int(failed), _cex(value=value, predicted=predicted) if failed else None, {"value": serialize(value)}


def _check_delta_normal(rng, p, m):
    n = rng.choice([-2, -1, 1, 2])
    e2 = ext.random_semidirect(rng, p, m, 3)
    eps = Mu8(2 * rng.randrange(4))
    if not ext.delta_normal_check(n, e2, eps):
        return _cex(n=n, e2=e2, eps=eps)


def _check_c_triple(rng, p, m):
    z = get_context(p).zeta1
    a = ext.random_scalar(rng, p) * z ** rng.randrange(8)
    b = ext.random_scalar(rng, p) * z ** rng.randrange(8)
    if ext.c_triple(a, b, p) != ext.c_triple_closed(a, b, p):
        return _cex(a=a, b=b)


def _check_d4_quotient(rng, p, m):
    x, y = ext.random_ftilde(rng, p, m), ext.random_ftilde(rng, p, m)
    if ext.quotient_to_d4(x * y) != ext.quotient_to_d4(x) * ext.quotient_to_d4(y):
        return _cex(x=x, y=y)


def _check_heisenberg(rng, p, m):
    x, x2 = heis.random_heis(rng, m), heis.random_heis(rng, m)
    e1, e2 = heis.random_paren(rng, p, m), heis.random_paren(rng, p, m)
    g = random_sp(rng, m, 3, p)
    if get_context(p).case == 3:
        central = heis.paren_central_case3(ext.random_scalar(rng, p), p, m)
    else:
        central = heis.paren_central_case1(ext.random_scalar(rng, p), p, m)
    checks = {
        "action": heis.alpha(heis.alpha(x, e1), e2) == heis.alpha(x, e1 * e2),
        "group_law": heis.alpha(x * x2, e1) == heis.alpha(x, e1) * heis.alpha(x2, e1),
        "central": heis.alpha(x, central) == x,
        "symplectic": heis.alpha(x, heis.sp_element(g, p)) == heis.HeisElement(la.row_times(x.w, g), x.t),
    }
    bad = [k for k, ok in checks.items() if not ok]
    if bad:
        return _cex(x=x, e1=e1, e2=e2, failed=bad)


def _check_lemma_a(rng, p, m):
    e1, e2 = heis.random_paren(rng, p, m), heis.random_paren(rng, p, m)
    if get_context(p).case == 3:
        ok = heis.lemma_a_case3(e1, e2)
    else:
        ok = heis.lemma_a_case1(e1.g, e2.g) and heis.sqrt_square_roundtrip(e1.k)
    if not ok:
        return _cex(e1=e1, e2=e2)


def _check_pgmp(rng, p, m):
    tags = ext.PGMP_TAGS[get_context(p).case]
    tag = tags[rng.randrange(2)]
    x, y, z = (ext.random_covering(rng, p, m, tag, 3) for _ in range(3))
    mul = ext.pgmp_multiply
    if mul(mul(x, y), z) != mul(x, mul(y, z)):
        return _cex(x=x, y=y, z=z)


def _exhaustive_d4_table(p, m):
    bad = ext.c_d4_check()
    return 512, bad, None, None


def _exhaustive_d4_sign(p, m):
    try:
        cert = ext.no_mu2_extension()
    except ext.FeasibleUnexpectedly:
        return 1, 1, _cex(reason="sign-valued system is feasible"), None
    details = {"rank": cert.rank, "augmented_rank": cert.augmented_rank, "witness": list(cert.equations)}
    return 1, 0, None, details


def _exhaustive_c_double_prime(p, m):
    return 64, ext.c_double_prime_check(p), None, None


def _exhaustive_c_prime(p, m):
    bad = heis.c_prime_matrix_check(p, m)
    return 16, bad, None, None


def _exhaustive_c_double_prime_root(p, m):
    return 16, heis.c_double_prime_square_check(p), None, None


def _exhaustive_hilbert(p, m):
    grid = hilbert_grid_oracle(p)
    bad = 0
    first = None
    for s in SquareClass.all(p):
        for t in SquareClass.all(p):
            v = hilbert_symbol(s.representative(), t.representative(), p)
            if v != grid[(s.name, t.name)]:
                bad += 1
                first = first or _cex(a=s, b=t, value=v)
    return 16, bad, first, None


def _exhaustive_gamma(p, m):
    bad = 0
    first = None
    n = 0
    for c in SquareClass.all(p):
        a = c.representative()
        for twist in (Fraction(1), Fraction(1, 2)):
            n += 1
            a_int = Fraction(integer_class_rep(c))
            oracle = snap_mu8(gauss_sum_oracle(a_int * twist, p))
            value = gamma_psi(a, STANDARD_PSI if twist == 1 else HALF_PSI, p)
            if oracle != value:
                bad += 1
                first = first or _cex(a=c, twist=twist, value=value, oracle=oracle)
    return n, bad, first, None


def _exhaustive_m_forms(p, m):
    n = 0
    bad = 0
    first = None
    for c in SquareClass.all(p):
        for j in range(m + 1):
            n += 1
            try:
                rao.m_from_invariants(c, j)
            except rao.InternalIdentityViolation:
                bad += 1
                first = first or _cex(x=c, j=j)
    return n, bad, first, None


LEMMAS: dict[str, LemmaCheck] = {
    "relation-2.6": LemmaCheck("c = m(g1 g2)^-1 m(g1) m(g2) c_PR", sampled=_check_relation),
    "sl2-example-2.2": LemmaCheck("SL2 closed forms for x, m, c_PR, c", sampled=_check_sl2),
    "bruhat": LemmaCheck("p1 omega_S p2 = g and x(g) under both pivot strategies", sampled=_check_bruhat),
    "gl2-example": LemmaCheck("GL2 closed form of C_BPR", sampled=_check_gl2),
    "nu2-gl2": LemmaCheck("nu_2 on GL2: (y2, a1) if c1 = 0, else 1", sampled=_check_nu2_gl2),
    "nu-composition": LemmaCheck("nu(M1 M2, g) and the coboundary relations", sampled=_check_nu_composition),
    "nu-sl2-table": LemmaCheck("nu on SL2 by class representative", cases=(3,), sampled=_check_nu_sl2),
    "nu-m-elements": LemmaCheck("nu on omega_S, on M, and multiplicativity", sampled=_check_nu_m_elements),
    "delta-d": LemmaCheck("cocycle values on Delta_D", sampled=_check_delta_d),
    "center": LemmaCheck("claimed central elements commute", sampled=_check_center),
    "center-witness": LemmaCheck("[1, -I] against [kappa(p), 1] for odd m", cases=(3,), exhaustive=_center_witness),
    "delta-normal": LemmaCheck("Delta_D is normal in the two-fold cover", cases=(1,), sampled=_check_delta_normal),
    "c-triple": LemmaCheck("sign cocycle on F^x against its closed form", cases=(1,), sampled=_check_c_triple),
    "d4-quotient": LemmaCheck("the D4 quotient is a homomorphism", cases=(1,), sampled=_check_d4_quotient),
    "lemma-CM112": LemmaCheck("mu4 cocycle on D4, all 512 triples", cases=(1,), exhaustive=_exhaustive_d4_table),
    "lemma-CM111": LemmaCheck("no sign-valued extension over D4", cases=(1,), exhaustive=_exhaustive_d4_sign),
    "c-double-prime": LemmaCheck("c'' cocycle, all 64 class triples", cases=(1,), exhaustive=_exhaustive_c_double_prime),
    "c-double-prime-root": LemmaCheck(
        "square of sqrt(c'') is c''", cases=(1,), exhaustive=_exhaustive_c_double_prime_root
    ),
    "c-prime-table": LemmaCheck("c' table against kappa products", cases=(3,), exhaustive=_exhaustive_c_prime),
    "heisenberg-action": LemmaCheck("twisted action axioms", sampled=_check_heisenberg),
    "lemma-a": LemmaCheck("a_h^-1 a_h'^-1 = c'(h, h') a_hh'^-1", sampled=_check_lemma_a),
    "pgmp-associativity": LemmaCheck("PGMp multiplication is associative", sampled=_check_pgmp),
    "hilbert-oracle": LemmaCheck("Hilbert symbol against solubility", exhaustive=_exhaustive_hilbert),
    "gamma-oracle": LemmaCheck("Weil indices against Gauss sums", exhaustive=_exhaustive_gamma),
    "m-two-forms": LemmaCheck("both expressions of m agree", exhaustive=_exhaustive_m_forms),
}


def verify_lemma(lemma_id: str, config: RunConfig) -> LemmaReport:
    if lemma_id not in LEMMAS:
        raise UnknownLemma(f"unknown lemma id {lemma_id!r}")
    check = LEMMAS[lemma_id]
    if config.case not in check.cases:
        raise WrongResidueCase(f"{lemma_id} does not apply to p = {config.p}")
    p, m = config.p, config.m
    start = time.perf_counter()
    if check.exhaustive is not None:
        trials, failures, first, details = check.exhaustive(p, m)
        return LemmaReport(lemma_id, trials, failures, first, (time.perf_counter() - start) * 1000, details)
    failures = 0
    first = None
    for i in range(config.samples):
        cex = check.sampled(trial_rng(config.seed, f"{lemma_id}-{p}-{m}", i), p, m)
        if cex is not None:
            failures += 1
            first = first if first is not None else cex
    return LemmaReport(lemma_id, config.samples, failures, first, (time.perf_counter() - start) * 1000)


def applicable_lemmas(p: int) -> list[str]:
    case = get_context(p).case
    return [k for k, v in LEMMAS.items() if case in v.cases]


# ---------------------------------------------------------------------------
# tables


def table_rows(what: str, p: int, m: int = 1) -> tuple[list[str], list[list[str]]]:
    names = ext.class_names(p)
    if what == "gamma":
        header = ["class", "gamma_psi", "gamma_psi^(1/2)", "gamma(a, psi^(1/2))", "source"]
        rows = []
        for c in SquareClass.all(p):
            a = c.representative()
            rows.append([
                c.name,
                _mu8_text(gamma_psi(a, STANDARD_PSI, p)),
                _mu8_text(gamma_psi(a, HALF_PSI, p)),
                _mu8_text(gamma_norm(a, HALF_PSI, p)),
                "closed form; Gauss-sum checked",
            ])
        return header, rows
    if what == "hilbert":
        grid = hilbert_grid_oracle(p)
        header = ["(a, b)"] + list(names)
        rows = []
        for s in SquareClass.all(p):
            row = [s.name]
            for t in SquareClass.all(p):
                v = hilbert_symbol(s.representative(), t.representative(), p)
                mark = "" if v == grid[(s.name, t.name)] else " (oracle disagrees)"
                row.append(f"{v:+d}{mark}")
            rows.append(row)
        return header, rows
    if what == "nu-sl2":
        if get_context(p).case != 3:
            raise WrongResidueCase("the SL2 nu table is stated for p = 3 mod 4")
        header = ["class of lambda_y", "g with c = 0", "g with c != 0"]
        rows = [
            ["1", "1", "1"],
            ["-1", "(a, -1)", "(c, -1) gamma(-1, psi^(1/2))^-1"],
            ["p", "(a, p) gamma_psi(ab p / 2)", "(c, p) gamma(p, psi^(1/2))^-1 gamma_psi(bd p / 2) gamma_psi(cd / 2p)"],
            [
                "-p",
                "(a, -p) gamma_psi(-ab p / 2)",
                "(c, -p) gamma(-p, psi^(1/2))^-1 gamma_psi(-bd p / 2) gamma_psi(-cd / 2p)",
            ],
        ]
        return header, rows
    if what == "c-prime":
        header = ["c'(s, t)"] + list(names)
        rows = []
        for s in names:
            row = [s]
            for t in names:
                v = heis.c_prime_case3(s, t, p) if get_context(p).case == 3 else ext.c_prime_case1(s, t, p)
                row.append(str(v))
            rows.append(row)
        return header, rows
    if what == "d4":
        els = ext.D4Element.all()
        header = ["c(x, y)"] + [repr(e) for e in els]
        rows = [[repr(x)] + [_mu8_text(ext.c_d4(x, y)) for y in els] for x in els]
        return header, rows
    raise UnknownTable(f"unknown table {what!r}; choose from gamma, hilbert, nu-sl2, c-prime, d4")


def _mu8_text(x: Mu8) -> str:
    return {0: "1", 2: "i", 4: "-1", 6: "-i"}.get(x.exponent, f"e^(2 pi i {x.exponent}/8)")


def format_table(header: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(str(r[i])) for r in [header] + rows) for i in range(len(header))]
    lines = ["  ".join(str(c).ljust(w) for c, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for r in rows:
        lines.append("  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# CLI


def _resolve_seed(seed: int) -> int:
    env = os.environ.get("METAPLECTIC_SEED")
    if env is None:
        return seed
    try:
        return int(env)
    except ValueError:
        raise click.UsageError(f"METAPLECTIC_SEED must be an integer, got {env!r}")


def _config(p, m, precision, samples, seed, lemma_ids=()) -> RunConfig:
    try:
        set_precision(precision)
        return RunConfig(p, m, precision, samples, _resolve_seed(seed), tuple(lemma_ids))
    except ValueError as exc:
        raise click.UsageError(str(exc))


def _emit(reports: Iterable[LemmaReport], as_json: bool, timing: bool) -> int:
    reports = list(reports)
    failed = sum(1 for r in reports if not r.passed)
    if as_json:
        doc = {
            "reports": [r.to_dict(timing) for r in reports],
            "summary": {"lemmas": len(reports), "failed": failed, "passed": failed == 0},
        }
        click.echo(json.dumps(doc, sort_keys=True, indent=2))
    else:
        for r in reports:
            status = "PASS" if r.passed else "FAIL"
            click.echo(f"{status}  {r.lemma_id}: {r.trials} trials, {r.failures} failures ({r.elapsed:.0f} ms)")
            if r.first_counterexample is not None:
                click.echo(f"      first counterexample: {json.dumps(r.first_counterexample, sort_keys=True)}")
            if r.details is not None:
                click.echo(f"      details: {json.dumps(r.details, sort_keys=True)}")
    return 0 if failed == 0 else 1


def common_options(f):
    f = click.option("--timing", is_flag=True, help="Include elapsed times in JSON output.")(f)
    f = click.option("--json", "as_json", is_flag=True, help="Emit a JSON report.")(f)
    f = click.option("--seed", type=int, default=0, show_default=True, help="Base seed (METAPLECTIC_SEED overrides).")(f)
    f = click.option("--samples", type=int, default=200, show_default=True, help="Random trials per identity.")(f)
    f = click.option("--precision", type=int, default=32, show_default=True, help="p-adic digits for approximations.")(f)
    f = click.option("--m", "m", type=int, default=1, show_default=True, help="Half the dimension of W.")(f)
    f = click.option("--p", "p", type=int, default=3, show_default=True, help="Odd prime.")(f)
    return f


def _fail_usage(exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(2)


@click.group()
def cli():
    """Verify metaplectic cocycle identities and related lemmas over Q_p."""


@cli.command("verify-cocycle")
@click.argument("name")
@common_options
def cmd_verify_cocycle(name, p, m, precision, samples, seed, as_json, timing):
    """Check the 2-cocycle identity for NAME on random triples."""
    config = _config(p, m, precision, samples, seed)
    try:
        report = verify_cocycle(name, config)
    except (UnknownCocycle, WrongResidueCase) as exc:
        _fail_usage(exc)
    sys.exit(_emit([report], as_json, timing))


@cli.command("verify-lemma")
@click.argument("lemma_ids", nargs=-1)
@click.option("--lemma", "lemma_opts", multiple=True, help="Lemma id (repeatable); 'all' runs every applicable one.")
@common_options
def cmd_verify_lemma(lemma_ids, lemma_opts, p, m, precision, samples, seed, as_json, timing):
    """Run the checks for the given lemma ids."""
    ids = list(lemma_ids) + list(lemma_opts)
    if not ids:
        raise click.UsageError("give at least one lemma id (or 'all')")
    config = _config(p, m, precision, samples, seed, ids)
    if "all" in ids:
        ids = applicable_lemmas(p)
    reports = []
    try:
        for lid in ids:
            reports.append(verify_lemma(lid, config))
    except (UnknownLemma, WrongResidueCase) as exc:
        _fail_usage(exc)
    sys.exit(_emit(reports, as_json, timing))


@cli.command("table")
@click.argument("what")
@click.option("--p", "p", type=int, default=3, show_default=True)
@click.option("--m", "m", type=int, default=1, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def cmd_table(what, p, m, as_json):
    """Print a value table: gamma, hilbert, nu-sl2, c-prime or d4."""
    try:
        get_context(p)
        header, rows = table_rows(what, p, m)
    except (UnknownTable, WrongResidueCase, ValueError) as exc:
        _fail_usage(exc)
    if as_json:
        click.echo(json.dumps({"table": what, "p": p, "header": header, "rows": rows}, sort_keys=True, indent=2))
    else:
        click.echo(format_table(header, rows))


@cli.command("decompose")
@click.argument("matrix")
@click.option("--p", "p", type=int, default=3, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def cmd_decompose(matrix, p, as_json):
    """Bruhat decomposition of a symplectic MATRIX given as JSON (or @file)."""
    try:
        get_context(p)
        text = open(matrix[1:]).read() if matrix.startswith("@") else matrix
        g = parse_matrix(text, p)
        if not is_symplectic(g):
            raise HarnessError("matrix is not symplectic")
    except (HarnessError, OSError, ValueError) as exc:
        _fail_usage(exc)
    d = bruhat_decompose(g, p)
    doc = {"p1": format_matrix(d.p1), "S": list(d.S), "p2": format_matrix(d.p2), "x": d.x.name, "j": d.j}
    if as_json:
        click.echo(json.dumps(doc, sort_keys=True, indent=2))
    else:
        click.echo(f"p1 = {json.dumps(doc['p1'])}")
        click.echo(f"S  = {doc['S']}")
        click.echo(f"p2 = {json.dumps(doc['p2'])}")
        click.echo(f"x(g) = {doc['x']}, j(g) = {doc['j']}")


@cli.command("hilbert")
@click.argument("a")
@click.argument("b")
@click.option("--p", "p", type=int, default=3, show_default=True)
def cmd_hilbert(a, b, p):
    """Hilbert symbol (A, B) over Q_p."""
    try:
        get_context(p)
        x, y = parse_scalar(a, p), parse_scalar(b, p)
        if x == 0 or y == 0:
            raise ParseError("arguments must be nonzero")
    except (HarnessError, ValueError) as exc:
        _fail_usage(exc)
    click.echo(f"{hilbert_symbol(x, y, p):+d}")


def main(argv: Optional[list] = None) -> None:
    cli.main(args=argv, prog_name="metaplectic")


if __name__ == "__main__":
    main()
