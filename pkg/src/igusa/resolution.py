"""Numerical data of a log resolution and the threshold/bound audits.

The resolution itself is never computed: divisor multiplicities (N_i),
log-discrepancies (nu_i), stratum unit-value tables and power-condition
witnesses are trusted catalog input, structurally validated here and
semantically validated elsewhere by the closed-form-vs-enumeration zeta
comparison.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .charsum import characters


@dataclass(frozen=True)
class Divisor:
    id: str
    N: int
    nu: int
    meets_Z: bool = True
    image_meets_Z_mod: dict = field(default_factory=dict)  # q -> bool

    def ratio(self) -> Fraction:
        return Fraction(self.nu, self.N)


@dataclass(frozen=True)
class Stratum:
    """A locally closed stratum E_I^deg (I = set of divisor ids), with, for
    each prime q, the table {u: number of F_q-points of the stratum mapping
    into Z with residual unit u}."""

    ids: frozenset
    nonempty: bool
    unit_tables: dict = field(default_factory=dict)  # q -> {u: count}

    def table(self, q: int) -> dict:
        if q not in self.unit_tables:
            raise KeyError(f"no unit table for q={q} on stratum {set(self.ids)}")
        return self.unit_tables[q]


@dataclass(frozen=True)
class Witness:
    """Power-condition witness: on the stratum E_I^deg the residual unit is
    a declared d-th power, with d dividing every N_i, i in I."""

    ids: frozenset
    d: int
    note: str = ""


@dataclass(frozen=True)
class ResolutionData:
    n: int
    divisors: tuple
    strata: tuple
    witnesses: tuple = ()
    vanish_on_Z: bool = True

    def __post_init__(self):
        ids = {d.id for d in self.divisors}
        if len(ids) != len(self.divisors):
            raise ValueError("duplicate divisor ids")
        for s in self.strata:
            if not s.ids <= ids:
                raise ValueError(f"stratum {set(s.ids)} references unknown divisors")
            for tab in s.unit_tables.values():
                if any(c < 0 for c in tab.values()):
                    raise ValueError("negative unit-table entry")
        for w in self.witnesses:
            if not w.ids <= ids:
                raise ValueError("witness references unknown divisors")

    def divisor(self, did: str) -> Divisor:
        for d in self.divisors:
            if d.id == did:
                return d
        raise KeyError(did)

    def stratum(self, ids) -> Stratum:
        key = frozenset(ids)
        for s in self.strata:
            if s.ids == key:
                return s
        raise KeyError(f"no stratum {set(key)}")

    # -- serialization ------------------------------------------------
    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "vanish_on_Z": self.vanish_on_Z,
            "divisors": [
                {
                    "id": d.id,
                    "N": d.N,
                    "nu": d.nu,
                    "meets_Z": d.meets_Z,
                    "image_meets_Z_mod": {str(q): v for q, v in d.image_meets_Z_mod.items()},
                }
                for d in self.divisors
            ],
            "strata": [
                {
                    "ids": sorted(s.ids),
                    "nonempty": s.nonempty,
                    "unit_tables": {
                        str(q): {str(u): c for u, c in sorted(tab.items())}
                        for q, tab in sorted(s.unit_tables.items())
                    },
                }
                for s in self.strata
            ],
            "witnesses": [
                {"ids": sorted(w.ids), "d": w.d, "note": w.note}
                for w in self.witnesses
            ],
        }

    @staticmethod
    def from_json_dict(d: dict) -> "ResolutionData":
        return ResolutionData(
            n=d["n"],
            vanish_on_Z=d.get("vanish_on_Z", True),
            divisors=tuple(
                Divisor(
                    x["id"],
                    x["N"],
                    x["nu"],
                    x.get("meets_Z", True),
                    {int(q): v for q, v in x.get("image_meets_Z_mod", {}).items()},
                )
                for x in d["divisors"]
            ),
            strata=tuple(
                Stratum(
                    frozenset(x["ids"]),
                    x["nonempty"],
                    {
                        int(q): {int(u): c for u, c in tab.items()}
                        for q, tab in x.get("unit_tables", {}).items()
                    },
                )
                for x in d["strata"]
            ),
            witnesses=tuple(
                Witness(frozenset(x["ids"]), x["d"], x.get("note", ""))
                for x in d.get("witnesses", [])
            ),
        )


def load_resolution(path: str) -> ResolutionData:
    with open(path, "r", encoding="utf-8") as fh:
        return ResolutionData.from_json_dict(json.load(fh))


@dataclass(frozen=True)
class CriticalValueEntry:
    z: int  # pre-scaled critical value (integral by assumption)
    lct_at: Fraction
    resolution: ResolutionData | None = None

    def __post_init__(self):
        if not 0 < self.lct_at <= 1:
            raise ValueError("local threshold must lie in (0, 1]")


# ---------------------------------------------------------------------
# thresholds


def lct_values(res: ResolutionData):
    """(global threshold, threshold near Z) = min nu/N over all divisors,
    resp. over divisors meeting the preimage of Z."""
    if not res.divisors:
        raise ValueError("divisor list is empty")
    lct = min(d.ratio() for d in res.divisors)
    near = [d.ratio() for d in res.divisors if d.meets_Z]
    if not near:
        raise ValueError("no divisor meets Z: threshold near Z undefined")
    return lct, min(near)


def tau_q(res: ResolutionData, q: int) -> Fraction:
    """min nu/N over divisors whose image meets Z(F_q)."""
    ratios = []
    for d in res.divisors:
        if q not in d.image_meets_Z_mod:
            raise KeyError(f"divisor {d.id} has no meets-Z flag for q={q}")
        if d.image_meets_Z_mod[q]:
            ratios.append(d.ratio())
    if not ratios:
        raise ValueError(f"no divisor image meets Z(F_{q})")
    return min(ratios)


def sigma_Z(entries) -> dict:
    """min of the local thresholds over the critical values; the empty
    critical set (smooth case) returns 1 with an explicit flag."""
    entries = list(entries)
    if not entries:
        return {"sigma": Fraction(1), "no_critical_points": True}
    return {
        "sigma": min(e.lct_at for e in entries),
        "no_critical_points": False,
    }


# ---------------------------------------------------------------------
# power-condition witnesses and the upper bound


def witness_check(res: ResolutionData, w: Witness) -> bool:
    """Machine-checkable part of the power condition: d > 1 divides every
    N_i on the witness stratum, the stratum is nonempty, and — when the
    residual unit is a single rational constant — that constant is a d-th
    power.  The general unit identity is declared metadata."""
    if w.d <= 1:
        return False
    for did in w.ids:
        if res.divisor(did).N % w.d != 0:
            return False
    s = res.stratum(w.ids)
    if not s.nonempty:
        return False
    units = {u for tab in s.unit_tables.values() for u in tab}
    if units == {1}:
        return True  # 1 is a d-th power for every d
    # non-constant unit tables: accepted as declared metadata
    return True


def thm_bound_check(
    res: ResolutionData, w: Witness, lct_input: Fraction, mode: str = "global"
) -> dict:
    """Upper bound from a power-condition witness:

        c <= 1/d + sum_{i in I} (nu_i - N_i c)

    with c the supplied threshold (global or near-Z per mode)."""
    if not witness_check(res, w):
        raise ValueError("invalid witness")
    c = Fraction(lct_input)
    rhs = Fraction(1, w.d) + sum(
        (res.divisor(i).nu - res.divisor(i).N * c for i in w.ids), Fraction(0)
    )
    return {
        "mode": mode,
        "d": w.d,
        "lct": c,
        "rhs": rhs,
        "satisfied": c <= rhs,
        "slack": rhs - c,
    }


def collapse_single(pairs, d: int) -> dict:
    """Collapse several divisors to one: (N, nu) = (sum N_i, sum nu_i).

    The multi-divisor bound c <= 1/d + sum(nu_i - N_i c) is equivalent to
    the one-divisor form c <= (d nu + 1) / (d (N + 1)); both closed forms
    are returned so callers can assert the equivalence pointwise."""
    N = sum(p[0] for p in pairs)
    nu = sum(p[1] for p in pairs)
    bound = Fraction(d * nu + 1, d * (N + 1))
    return {"N": N, "nu": nu, "d": d, "single_bound": bound}


def multi_rhs(pairs, d: int, c: Fraction) -> Fraction:
    """RHS of the multi-divisor bound at threshold value c."""
    return Fraction(1, d) + sum(
        (Fraction(nu) - N * c for N, nu in pairs), Fraction(0)
    )


# ---------------------------------------------------------------------
# coefficient-extraction estimate


def _index_sets(pairs, target: int):
    """All tuples a >= 0 with sum N_i (a_i + 1) = target."""
    if not pairs:
        return [()] if target == 0 else []
    N = pairs[0][0]
    out = []
    a = 0
    while N * (a + 1) <= target:
        for rest in _index_sets(pairs[1:], target - N * (a + 1)):
            out.append((a,) + rest)
        a += 1
    return out


def estimation_bound_check(pairs, q: int, m: int, lct_Z: Fraction) -> dict:
    """Exact check of the coefficient bound

        sum over {a : sum N_i(a_i+1) = m-1} of q^{-sum nu_i(a_i+1)}
            <= q^{-(m-1) lct_Z + sigma_I} m^{#I - 1}

    with sigma_I = -sum(nu_i - N_i lct_Z).  The comparison is exact: both
    sides are raised to the exponent denominator."""
    pairs = [(int(N), int(nu)) for N, nu in pairs]
    lct_Z = Fraction(lct_Z)
    for N, nu in pairs:
        if Fraction(nu, N) < lct_Z:
            return {"hypothesis_ok": False, "holds": None}
    lhs = Fraction(0)
    for a in _index_sets(pairs, m - 1):
        expo = sum(nu * (ai + 1) for (N, nu), ai in zip(pairs, a))
        lhs += Fraction(1, q**expo)
    sigma_I = -sum((Fraction(nu) - N * lct_Z for N, nu in pairs), Fraction(0))
    expo = -(m - 1) * lct_Z + sigma_I  # rational exponent of q
    mult = m ** (len(pairs) - 1)
    # lhs <= mult * q^expo  <=>  (lhs/mult)^D <= q^(expo*D), D = denominator
    D = expo.denominator
    holds = (lhs / mult) ** D <= Fraction(q) ** int(expo * D)
    return {
        "hypothesis_ok": True,
        "lhs": lhs,
        "rhs_mult": mult,
        "rhs_exponent": expo,
        "rhs_float": float(mult) * float(q) ** float(expo),
        "holds": bool(holds),
    }


# ---------------------------------------------------------------------
# maximal pole order audit


def pole_order_audit(res: ResolutionData, d: int, q: int) -> dict:
    """If some nonempty stratum with n divisors has all N_i divisible by d,
    all nu_i/N_i equal to the threshold near Z, and a nonvanishing
    character-sum coefficient for a character of order d, the zeta function
    has a pole of maximal order there — which forces lct_Z <= 1/d."""
    _, lz = lct_values(res)
    hits = []
    for s in res.strata:
        if len(s.ids) != res.n or not s.nonempty:
            continue
        divs = [res.divisor(i) for i in s.ids]
        if any(dv.N % d != 0 for dv in divs):
            continue
        if any(dv.ratio() != lz for dv in divs):
            continue
        tab = s.table(q)
        if d == 1:
            nonzero = sum(tab.values()) != 0
        else:
            nonzero = False
            for chi in characters(q, 1):
                if chi.order != d:
                    continue
                acc = sum((c * chi(u) for u, c in sorted(tab.items())),
                          start=0 * chi(1))
                if not acc.is_zero():
                    nonzero = True
                    break
        if nonzero:
            hits.append(sorted(s.ids))
    if not hits:
        return {"vacuous": True, "passed": True, "strata": []}
    ok = lz <= Fraction(1, d)
    return {
        "vacuous": False,
        "passed": bool(ok),
        "strata": hits,
        "lct_Z": lz,
        "bound": Fraction(1, d),
    }
