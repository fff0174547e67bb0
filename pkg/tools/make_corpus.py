"""Regenerate the bundled corpus (system files and expectations).

Run from the repository root:  python tools/make_corpus.py
"""

import json
from pathlib import Path

from vee.families import instantiate

OUT = Path(__file__).resolve().parents[1] / "src" / "vee" / "corpus"

# name, family, params, expectations, note
ENTRIES = [
    ("a2", "an", {"c": [1, 1, 1]}, {"vee": True, "hyperplanes": 3, "exponents": [1, 2],
                                    "harmonic": True, "degrees": [1, 2]},
     "A2 root system; Coxeter exponents 1, 2"),
    ("a3", "an", {"c": [1, 1, 1, 1]}, {"vee": True, "hyperplanes": 6, "exponents": [1, 2, 3],
                                       "harmonic": True, "degrees": [1, 2, 3]},
     "A3 root system"),
    ("a3_deformed", "an", {"c": [1, 2, 3, -1]}, {"vee": True, "hyperplanes": 6, "exponents": [1, 2, 3],
                                                 "harmonic": True, "degrees": [1, 2, 3]},
     "deformed A3(c); harmonic for every admissible c"),
    ("a4", "braid", {"n": 5}, {"vee": True, "hyperplanes": 10, "exponents": [1, 2, 3, 4],
                               "harmonic": True, "degrees": [1, 2, 3, 4]},
     "braid arrangement on five points"),
    ("b2", "bn", {"c": [1, 1, 2]}, {"vee": True, "hyperplanes": 4, "exponents": [1, 3],
                                    "harmonic": True, "degrees": [1, 3]},
     "deformed B2(c)"),
    ("b3", "bn", {"c": [1, 1, 2, 3]}, {"vee": True, "hyperplanes": 9, "exponents": [1, 3, 5],
                                       "harmonic": True, "degrees": [1, 3, 5]},
     "deformed B3(c), generic c"),
    ("b3_restricted", "bn", {"c": [-1, 1, 1, 3]},
     {"vee": True, "hyperplanes": 7, "exponents": [1, 3, 3], "poincare": [1, 7, 15, 9],
      "harmonic": False},
     "B3(-1;1,1,3): a restriction of D5; free but not harmonic"),
    ("b3_zaslavsky", "bn", {"c": [-1, 1, 2, 2]},
     {"vee": True, "hyperplanes": 8, "exponents": [1, 3, 4], "harmonic": True, "degrees": [1, 3, 4]},
     "Zaslavsky arrangement with two coordinate hyperplanes"),
    ("d4", "f4", {"s": 0}, {"vee": True, "hyperplanes": 12, "exponents": [1, 3, 3, 5],
                            "harmonic": True, "degrees": [1, 3, 3, 5]},
     "F4 family at s = 0 degenerates to D4"),
    ("f4", "f4", {"s": 1}, {"vee": True, "hyperplanes": 24, "exponents": [1, 5, 7, 11],
                            "harmonic": True, "degrees": [1, 5, 7, 11]},
     "F4 with all covectors of equal length"),
    ("f4_roots", "f4", {"s": "1/2"}, {"vee": True, "hyperplanes": 24, "exponents": [1, 5, 7, 11],
                                      "harmonic": True, "degrees": [1, 5, 7, 11]},
     "F4 root system normalization"),
    ("f3", "f3", {"s": 1}, {"vee": True, "hyperplanes": 13, "exponents": [1, 5, 7]},
     "F3(t) family"),
    ("b3_coxeter", "f3", {"s": 0}, {"vee": True, "hyperplanes": 9, "exponents": [1, 3, 5],
                                    "harmonic": True, "degrees": [1, 3, 5]},
     "F3 family at s = 0 degenerates to B3"),
    ("f3_degenerate", "f3", {"s": "-1/2"},
     {"vee": "degenerate", "hyperplanes": 10, "exponents": None, "poincare": [1, 10, 35, 26]},
     "zero canonical form; Poincaré polynomial (1+t)(1+9t+26t^2) does not split"),
    ("g3", "g3", {"t": 1}, {"vee": True, "hyperplanes": 13, "exponents": [1, 5, 7]},
     "G3(t) family"),
    ("g3_half", "g3", {"t": "1/2"}, {"vee": True, "hyperplanes": 10, "exponents": [1, 4, 5]},
     "G3 at t = 1/2 loses three covectors"),
    ("d3", "d3", {"t": 2, "s": 5}, {"vee": True, "hyperplanes": 7, "exponents": [1, 3, 3]},
     "D3(t,s) family"),
    ("d3_a3", "d3", {"t": 2, "s": 3}, {"vee": True, "hyperplanes": 6, "exponents": [1, 2, 3]},
     "D3 with a vanishing coordinate covector: an A3 arrangement"),
    ("ab4", "ab4", {"k": 2}, {"vee": True, "hyperplanes": 18, "exponents": [1, 5, 5, 7]},
     "AB4(k) family"),
    ("ab4_k1", "ab4", {"k": 1}, {"vee": True, "hyperplanes": 17, "exponents": [1, 4, 5, 7]},
     "AB4 at k = 1 loses the last coordinate covector"),
    ("ab4_k_third", "ab4", {"k": "1/3"}, {"vee": True, "hyperplanes": 12, "exponents": [1, 3, 3, 5]},
     "AB4 at k = 1/3 loses six covectors"),
    ("ab4_a1_1", "ab4_a1_1", {"s": 1}, {"vee": True, "hyperplanes": 11, "exponents": [1, 5, 5]},
     "first restriction of AB4"),
    ("ab4_a1_1_half", "ab4_a1_1", {"s": "1/2"}, {"vee": True, "hyperplanes": 10, "exponents": [1, 4, 5]},
     "first restriction at s = 1/2"),
    ("ab4_a1_2", "ab4_a1_2", {"s": 1}, {"vee": True, "hyperplanes": 10, "exponents": [1, 4, 5]},
     "second restriction of AB4"),
    ("ab4_a1_2_zero", "ab4_a1_2", {"s": 0}, {"vee": True, "hyperplanes": 9, "exponents": [1, 3, 5]},
     "second restriction at s = 0: a B3 arrangement"),
    ("dihedral_b2", "dihedral_b2", {"a2": 1, "b2": 3},
     {"vee": True, "hyperplanes": 4, "exponents": [1, 3], "harmonic": True, "degrees": [1, 3]},
     "B2 with two covector lengths"),
    ("boolean3", "boolean", {"n": 3}, {"vee": True, "hyperplanes": 3, "exponents": [1, 1, 1]},
     "coordinate hyperplanes"),
]


def main():
    (OUT / "systems").mkdir(parents=True, exist_ok=True)
    entries = []
    for name, family, params, expect, note in ENTRIES:
        sys_ = instantiate(family, **params)
        path = OUT / "systems" / f"{name}.json"
        path.write_text(json.dumps(sys_.to_json(), indent=2) + "\n")
        entries.append({
            "name": name,
            "system": f"systems/{name}.json",
            "family": family,
            "params": params,
            "note": note,
            "expect": expect,
        })
    (OUT / "expectations.json").write_text(json.dumps({"entries": entries}, indent=2) + "\n")


if __name__ == "__main__":
    main()
