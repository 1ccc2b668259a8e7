"""Randomized hunt for anomalies of the long-time contraction rate.

Rates of bump profiles reduce to spectral radii of small matrix
products, so candidate witnesses are cheap to draw and test in bulk.
Every emitted finding is re-verified through the cocycle machinery (an
independent evaluation path) before it is reported, and the per-trial
RNG streams are keyed by (seed, trial) so parallel and serial runs
produce identical findings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import gallery
from .cocycle import c_infinity
from .damping import TWO_PI, add, scale
from .errors import InvalidInput
from .matrix_kernel import nearest_hpd

GENERATOR_NAME = "numpy Philox(4x64) keyed by (seed, trial)"
MARGIN_MIN = 1e-6
_REVERIFY_TOL = 1e-10

PROPERTIES = ("scaling_super", "scaling_sub", "additivity_super", "additivity_sub")


@dataclass(frozen=True, eq=False)
class Finding:
    """A strict witness of one rate anomaly, reproducible from its seed."""

    property: str
    witnesses: tuple  # factor matrices: one tuple ((A...),) or two ((A...), (B...))
    values: dict
    margin: float
    seed: int
    trial: int


def random_hpd(n: int, rng: np.random.Generator) -> np.ndarray:
    """Hermitian positive definite with eigenvalues uniform in [0.02, 1].

    The eigenvalue floor keeps the matrix logarithm and large-power
    scans of the resulting factors well conditioned.
    """
    if n < 1:
        raise InvalidInput("dimension must be at least 1")
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    Q = Q * (np.diag(R) / np.abs(np.diag(R)))  # fix phases for a clean Haar draw
    w = rng.uniform(0.02, 1.0, n)
    A = (Q * w) @ Q.conj().T
    return 0.5 * (A + A.conj().T)


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    key = np.array([seed % 2**64, trial % 2**64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _rate_of_product(mats) -> float:
    P = np.eye(mats[0].shape[0], dtype=complex)
    for M in mats:
        P = P @ M
    rho = np.abs(np.linalg.eigvals(P)).max()
    return float(-np.log(rho) / TWO_PI)


def _evaluate_trial(prop: str, mats):
    """(witnesses, values, margin) for one candidate draw.

    Factors are eigenvalue-floored exactly as the profile builders do,
    so the stored values agree with the cocycle re-verification path to
    roundoff even for witnesses printed with coarse decimals.
    """
    if prop.startswith("scaling"):
        fl = [nearest_hpd(M, gallery.EIG_FLOOR) for M in mats]
        base = _rate_of_product(fl)
        doubled = _rate_of_product([M @ M for M in fl])
        values = {"c_base": base, "c_doubled": doubled}
        margin = doubled - 2.0 * base if prop == "scaling_super" else base - doubled
        return (tuple(mats),), values, margin
    a_mats, b_mats = mats
    A1, A2 = (nearest_hpd(M, gallery.EIG_FLOOR) for M in a_mats)
    B1, B2 = (nearest_hpd(M, gallery.EIG_FLOOR) for M in b_mats)
    c_sum = _rate_of_product([A1, B1, A2, B2])
    c_a = _rate_of_product([A1, A2])
    c_b = _rate_of_product([B1, B2])
    values = {"c_combined": c_sum, "c_a": c_a, "c_b": c_b}
    gap = c_sum - (c_a + c_b)
    margin = gap if prop == "additivity_super" else -gap
    return (tuple(a_mats), tuple(b_mats)), values, margin


def _reference_witness(prop: str):
    if prop == "scaling_super":
        return gallery.SUPERLINEAR_TRIPLE
    if prop == "scaling_sub":
        return gallery.NONMONOTONE_TRIPLE
    if prop == "additivity_super":
        return gallery.SUPERADDITIVE_PAIR
    return gallery.SUBADDITIVE_PAIR


def _draw(prop: str, n: int, rng) -> tuple:
    if prop.startswith("scaling"):
        return tuple(random_hpd(n, rng) for _ in range(3))
    return (
        (random_hpd(n, rng), random_hpd(n, rng)),
        (random_hpd(n, rng), random_hpd(n, rng)),
    )


def verify_finding(f: Finding, tol: float = _REVERIFY_TOL) -> bool:
    """Recompute the stored values through the cocycle path.

    Builds the actual bump profiles from the witnesses and reads the
    rates off their period maps, a route independent of the product
    shortcut used during the hunt.
    """
    if f.property.startswith("scaling"):
        p = gallery.bump_cycle_profile(f.witnesses[0])
        base = c_infinity(p)
        doubled = c_infinity(scale(p, 2.0))
        ok = (
            abs(base - f.values["c_base"]) <= tol
            and abs(doubled - f.values["c_doubled"]) <= tol
        )
        strict = (
            doubled - 2.0 * base > MARGIN_MIN
            if f.property == "scaling_super"
            else base - doubled > MARGIN_MIN
        )
        return bool(ok and strict)
    a, b = gallery.interleaved_bump_pair(f.witnesses[0], f.witnesses[1])
    c_sum = c_infinity(add(a, b))
    c_a = c_infinity(a)
    c_b = c_infinity(b)
    ok = (
        abs(c_sum - f.values["c_combined"]) <= tol
        and abs(c_a - f.values["c_a"]) <= tol
        and abs(c_b - f.values["c_b"]) <= tol
    )
    gap = c_sum - (c_a + c_b)
    strict = gap > MARGIN_MIN if f.property == "additivity_super" else -gap > MARGIN_MIN
    return bool(ok and strict)


def hunt(
    prop: str,
    trials: int,
    seed: int,
    n: int = 2,
    include_reference: bool = True,
) -> list[Finding]:
    """Search ``trials`` random draws for strict witnesses of ``prop``.

    Trial 0 optionally injects the built-in gallery witness for the
    property so a single-trial hunt already demonstrates the anomaly.
    Findings are sorted by margin, largest first; an empty list is a
    valid outcome.
    """
    if prop not in PROPERTIES:
        raise InvalidInput(f"property must be one of {PROPERTIES}")
    if trials < 1:
        raise InvalidInput("need at least one trial")
    findings = []
    for trial in range(trials):
        if trial == 0 and include_reference and n == 2:
            mats = _reference_witness(prop)
            if prop.startswith("scaling"):
                mats = tuple(np.asarray(M) for M in mats)
        else:
            mats = _draw(prop, n, _trial_rng(seed, trial))
        witnesses, values, margin = _evaluate_trial(prop, mats)
        if margin <= MARGIN_MIN:
            continue
        candidate = Finding(prop, witnesses, values, float(margin), seed, trial)
        if verify_finding(candidate):
            findings.append(candidate)
    findings.sort(key=lambda f: (-f.margin, f.trial))
    return findings


# ---------------------------------------------------------------------------
# Findings files (JSON lines)


def _matrix_to_pairs(M) -> list:
    A = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in A]


def _matrix_from_pairs(rows) -> np.ndarray:
    A = np.asarray(rows, dtype=float)
    return A[..., 0] + 1j * A[..., 1]


def finding_to_dict(f: Finding) -> dict:
    from . import __version__

    return {
        "property": f.property,
        "witnesses": [[_matrix_to_pairs(M) for M in group] for group in f.witnesses],
        "values": {k: float(v) for k, v in sorted(f.values.items())},
        "margin": f.margin,
        "seed": f.seed,
        "trial": f.trial,
        "generator": GENERATOR_NAME,
        "version": __version__,
        "convention": "sec1",
    }


def finding_from_dict(doc: dict) -> Finding:
    witnesses = tuple(
        tuple(_matrix_from_pairs(M) for M in group) for group in doc["witnesses"]
    )
    return Finding(
        property=doc["property"],
        witnesses=witnesses,
        values=dict(doc["values"]),
        margin=float(doc["margin"]),
        seed=int(doc["seed"]),
        trial=int(doc["trial"]),
    )


def write_findings(findings, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for f in findings:
            fh.write(json.dumps(finding_to_dict(f), sort_keys=True) + "\n")


def read_findings(path) -> list[Finding]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                out.append(finding_from_dict(json.loads(line)))
    return out
