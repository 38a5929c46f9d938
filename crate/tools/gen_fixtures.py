#!/usr/bin/env python3
"""Write the bundled fixtures and their sha256 manifest.

Element indices refer to the groups in crates/core/data/catalog.json:
  C_n   element k = k * generator
  S3    1, 2 rotations; 3, 4, 5 transpositions
  Q8    2 = -1; [0,1,2,3], [0,2,4,6], [0,2,5,7] cyclic of order 4
  D4    2 = central rotation; [0,1,2,3] rotations; 4..7 reflections
"""
import hashlib
import json
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "crates/core/data/fixtures"


def module(group, invariants, action):
    return {
        "schema_version": 1,
        "group": group,
        "invariant_factors": invariants,
        "action": {str(k): v for k, v in action.items()},
    }


def prime(label, decomposition, inertia, frobenius, norm):
    return {
        "label": label,
        "decomposition": decomposition,
        "inertia": inertia,
        "frobenius": frobenius,
        "residue_norm": norm,
    }


def field(name, group, places, ramified, mu, mu_order, cm_j=None, p_info=None):
    return {
        "schema_version": 1,
        "name": name,
        "group": group,
        "base_is_rationals": True,
        "k_totally_real": True,
        "cm_j": cm_j,
        "places": places,
        "ramified_primes": ramified,
        "base_ramified_primes": [],
        "mu": mu,
        "mu_order": mu_order,
        "p_info": p_info or {},
    }


def class_group(name, group, source, invariants, action, labels):
    return {
        "schema_version": 1,
        "name": name,
        "group": group,
        "source": source,
        "labels": labels,
        "module": module(group, invariants, action),
    }


def theorem(chi, p, expect, x=None):
    c = {"kind": "theorem", "chi": chi, "p": p, "expect": expect}
    if x is not None:
        c["x"] = x
    return c


def corollary(p, expect):
    return {"kind": "corollary", "p": p, "expect": expect}


def u_chi(chi, expect):
    return {"kind": "u_chi", "chi": chi, "expect": expect}


def condition(chi, p, expect):
    return {"kind": "condition", "chi": chi, "p": p, "expect": expect}


def supplied(chi, conductor, coeffs):
    return {"character_key": chi, "conductor": conductor, "value_coeffs": coeffs, "provider": "SUPPLIED"}


def fixture(name, description, fld, checks, cl=None, dirichlet=None, forms=None, values=None):
    f = {"schema_version": 1, "name": name, "description": description, "field": fld}
    if cl is not None:
        f["class_group"] = cl
    if forms is not None:
        f["forms_discriminant"] = forms
    f["lvalues"] = {}
    if dirichlet:
        f["lvalues"]["dirichlet"] = dirichlet
    if values:
        f["lvalues"]["supplied"] = values
    f["checks"] = checks
    return f


FIXTURES = [
    fixture(
        "q_sqrt_m23",
        "Q(sqrt(-23))/Q, h = 3; class group from reduced forms of discriminant -23.",
        field(
            "Q(sqrt(-23))",
            "C2",
            [[0, 1]],
            [prime("23", [0, 1], [0, 1], 0, 23)],
            module("C2", [2], {1: [[1]]}),
            2,
            cm_j=1,
            p_info={"23": {"ramified_in_k_over_q": True, "zeta_p_condition": "TRUE"}},
        ),
        [
            theorem("chi1", 3, "PASS"),
            theorem("chi1", 23, "PASS"),
            corollary(3, "PASS"),
            condition("chi1", 3, "HOLDS_TRIVIALLY"),
            condition("chi1", 23, "HOLDS"),
        ],
        cl=class_group("cl(Q(sqrt(-23)))", "C2", "FORMS_ORACLE", [3], {1: [[2]]}, ["(2,-1,3)"]),
        dirichlet={"modulus": 23, "unit_images": [1]},
        forms=23,
    ),
    fixture(
        "q_zeta7",
        "Q(zeta_7)/Q with sigma_3 as generator; class number 1.",
        field(
            "Q(zeta_7)",
            "C6",
            [[0, 3]],
            [prime("7", [0, 1, 2, 3, 4, 5], [0, 1, 2, 3, 4, 5], 0, 7)],
            module("C6", [14], {1: [[3]]}),
            14,
            cm_j=3,
        ),
        [
            theorem("chi1", 5, "PASS"),
            theorem("chi3", 5, "PASS"),
            theorem("chi3", 3, "PASS"),
            corollary(5, "PASS"),
        ],
        cl=class_group("cl(Q(zeta_7))", "C6", "INGESTED", [], {1: []}, []),
        dirichlet={"modulus": 7, "unit_images": [1]},
    ),
    fixture(
        "q_zeta23",
        "Q(zeta_23)/Q with sigma_5 as generator; the class group is Z/3 with "
        "sigma_5 acting by -1, the class of a prime above 2 as generator.",
        field(
            "Q(zeta_23)",
            "C22",
            [[0, 11]],
            [prime("23", list(range(22)), list(range(22)), 0, 23)],
            module("C22", [46], {1: [[5]]}),
            46,
            cm_j=11,
            p_info={"23": {"ramified_in_k_over_q": True, "zeta_p_condition": "TRUE"}},
        ),
        [
            theorem("chi11", 3, "PASS"),
            corollary(3, "PASS"),
            condition("chi11", 23, "HOLDS"),
        ],
        cl=class_group("cl(Q(zeta_23))", "C22", "INGESTED", [3], {1: [[2]]}, ["[P2]"]),
        dirichlet={"modulus": 23, "unit_images": [1]},
    ),
    fixture(
        "s3_hilbert_m23",
        "Hilbert class field of Q(sqrt(-23)) over Q: an S3-extension, not CM, "
        "class number 1; inertia at 23 is generated by a transposition.",
        field(
            "H(Q(sqrt(-23)))",
            "S3",
            [[0, 3]],
            [prime("23", [0, 3], [0, 3], 0, 23)],
            module("S3", [2], {1: [[1]], 3: [[1]]}),
            2,
        ),
        [
            theorem("chi1", 3, "PASS"),
            theorem("chi2", 5, "PASS"),
            u_chi("chi2", "LOWER_BOUND"),
            corollary(5, "ERROR"),
        ],
        cl=class_group("cl(H)", "S3", "INGESTED", [], {1: [], 3: []}, []),
        # the sign character cuts out Q(sqrt(-23)): L(0) = 2h/w = 3
        values=[supplied("chi1", 1, ["3"])],
    ),
    fixture(
        "q8_synthetic",
        "Synthetic Q8 ramification data with normal inertia groups, for U checks.",
        field(
            "synthetic Q8",
            "Q8",
            [[0, 2]],
            [
                prime("p1", list(range(8)), [0, 1, 2, 3], 4, 5),
                prime("p2", [0, 2, 4, 6], [0, 2], 4, 13),
            ],
            module("Q8", [2], {1: [[1]], 4: [[1]]}),
            2,
            cm_j=2,
        ),
        [u_chi(f"chi{i}", "EXACT") for i in range(1, 5)] + [condition("chi4", 3, "HOLDS_TRIVIALLY")],
    ),
    fixture(
        "d4_synthetic",
        "Synthetic D4 ramification data with normal inertia groups, for U checks.",
        field(
            "synthetic D4",
            "D4",
            [[0, 2]],
            [
                prime("p1", list(range(8)), [0, 1, 2, 3], 4, 5),
                prime("p2", [0, 2, 5, 7], [0, 2, 5, 7], 0, 13),
            ],
            module("D4", [2], {1: [[1]], 4: [[1]]}),
            2,
            cm_j=2,
        ),
        [u_chi(f"chi{i}", "EXACT") for i in range(1, 5)],
    ),
]


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    entries = []
    for f in FIXTURES:
        text = json.dumps(f, indent=2) + "\n"
        name = f"{f['name']}.json"
        (OUT / name).write_text(text)
        entries.append({"file": name, "sha256": hashlib.sha256(text.encode()).hexdigest()})
    manifest = {"schema_version": 1, "fixtures": entries}
    (OUT / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


if __name__ == "__main__":
    main()
