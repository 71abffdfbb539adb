"""JSON export/import of computed approximation coefficients.

The document schema is
    {alpha, beta, m, k, E, poles[], residues[], c0[], poly[], precision_bits}
holding the partial-fraction data needed to apply the approximation.  Floats
are serialized with shortest round-trip repr, so a save/load cycle preserves
double-precision values bit-exactly.
"""

from __future__ import annotations

import json

import numpy as np

from .fractions import PartialFractionForm
from .remez import BuraParams


def coefficients_to_dict(pf: PartialFractionForm) -> dict:
    p = pf.params
    return {
        "alpha": p.alpha,
        "beta": p.beta,
        "m": p.m,
        "k": p.k,
        "E": pf.minimax_error,
        "poles": [float(x) for x in pf.poles],
        "residues": [float(x) for x in pf.residues],
        "c0": [float(x) for x in pf.inverse_part],
        "poly": [float(x) for x in pf.poly_part],
        "precision_bits": pf.precision_bits,
    }


def coefficients_from_dict(doc: dict) -> PartialFractionForm:
    params = BuraParams(alpha=doc["alpha"], beta=doc["beta"], m=doc["m"], k=doc["k"])
    poles = np.array(doc["poles"], dtype=np.float64)
    residues = np.array(doc["residues"], dtype=np.float64)
    return PartialFractionForm(
        params=params,
        poly_part=np.array(doc["poly"], dtype=np.float64),
        inverse_part=np.array(doc["c0"], dtype=np.float64),
        residues=residues,
        poles=poles,
        residues_raw=residues * poles**params.beta,
        minimax_error=float(doc["E"]),
        precision_bits=int(doc["precision_bits"]),
    )


def save_coefficients(path, pf: PartialFractionForm) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(coefficients_to_dict(pf), fh, indent=2)
        fh.write("\n")


def load_coefficients(path) -> PartialFractionForm:
    with open(path, encoding="utf-8") as fh:
        return coefficients_from_dict(json.load(fh))
