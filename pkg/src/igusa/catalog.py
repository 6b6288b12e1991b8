"""Built-in catalog of worked polynomials and their shipped data files."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .polys import IntPolynomial, ZConstraint
from .resolution import CriticalValueEntry, ResolutionData


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    display: str
    f: IntPolynomial
    Z: ZConstraint
    n: int
    sigma: Fraction
    no_critical_points: bool
    critical: tuple  # tuple of (Fraction critical value, Fraction local lct)
    resolution: ResolutionData | None
    primes: tuple
    p_threshold: int
    decay_grid: tuple  # tuple of (p, tuple of m)
    decay_constant: float
    moi_expected: str | None  # "inf", a fraction string, or None (unasserted)

    def moi_expected_value(self):
        from math import inf

        if self.moi_expected is None:
            return None
        return inf if self.moi_expected == "inf" else Fraction(self.moi_expected)

    def critical_entries(self):
        """Critical values as integer-valued entries; only values that are
        p-adic integers for some prime make sense downstream, so the
        rational ones are reduced by the caller via crit_values_mod."""
        return [
            CriticalValueEntry(int(z) if z.denominator == 1 else 0, l)
            for z, l in self.critical
        ]

    def crit_values_mod(self, p: int, m: int):
        """Critical values reduced to integers mod p^m (the caller-side
        pre-scaling of rational critical values); requires each
        denominator to be a unit at p."""
        q = p**m
        out = []
        for z, _ in self.critical:
            if z.denominator % p == 0:
                raise ValueError(
                    f"critical value {z} is not a p-adic integer at p={p}"
                )
            out.append(z.numerator * pow(z.denominator, -1, q) % q)
        return out

    def lct_pair(self):
        from .resolution import lct_values

        if self.resolution is None:
            return None
        return lct_values(self.resolution)


def _data_root():
    return resources.files("igusa").joinpath("data")


def load_catalog():
    """All shipped catalog entries, in file order."""
    blob = json.loads(_data_root().joinpath("catalog.json").read_text("utf-8"))
    out = []
    for d in blob:
        res = None
        if d.get("resolution"):
            res_blob = json.loads(
                _data_root()
                .joinpath("resolutions")
                .joinpath(d["resolution"])
                .read_text("utf-8")
            )
            res = ResolutionData.from_json_dict(res_blob)
        out.append(
            CatalogEntry(
                name=d["name"],
                display=d["display"],
                f=IntPolynomial.from_json_dict(d["f"]),
                Z=ZConstraint.from_json_list(d.get("Z", [])),
                n=d["n"],
                sigma=Fraction(d["sigma"]),
                no_critical_points=d.get("no_critical_points", False),
                critical=tuple(
                    (Fraction(c["z"]), Fraction(c["lct"])) for c in d["critical"]
                ),
                resolution=res,
                primes=tuple(d["primes"]),
                p_threshold=d["p_threshold"],
                decay_grid=tuple((p, tuple(ms)) for p, ms in d["decay_grid"]),
                decay_constant=d["decay_constant"],
                moi_expected=d.get("moi_expected"),
            )
        )
    return out


def get_entry(name: str) -> CatalogEntry:
    for ent in load_catalog():
        if ent.name == name:
            return ent
    raise KeyError(f"no catalog entry named {name!r}")
