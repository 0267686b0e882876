"""Convert the GAP export (tools/export_corpus.g output) into the shipped JSON corpus.

usage: python tools/build_catalog.py corpus_export.txt src/eprim/data
"""

import argparse
import json
import re
from pathlib import Path

SCHEMA_VERSION = 1

GROUP_META = {
    "a5": ("A5", "A5", True, "natural action"),
    "a6": ("A6", "A6", True, "PSL(2,9) on the projective line, inside PGammaL(2,9)"),
    "s6": ("S6", "A6", True, "index-2 subgroup of PGammaL(2,9) with elements of order 6"),
    "m10": ("M10", "A6", True, "index-2 subgroup of PGammaL(2,9) without elements of order 6 or 10"),
    "pgl2_9": ("PGL2(9)", "A6", True, "index-2 subgroup of PGammaL(2,9) with elements of order 10"),
    "aut_a6": ("Aut(A6)", "A6", True, "PGammaL(2,9) on the projective line"),
    "s8": ("S8", "A8", True, "natural action"),
    "a8": ("A8", "A8", True, "natural action"),
    "m12_2": ("M12.2", "M12", True, "table of marks library, degree-24 action"),
    "psu3_5_2": ("PSU3(5).2", "PSU3(5)", True, "table of marks library, degree-50 action"),
    "j1": ("J1", "J1", True, "primitive groups library, degree 266"),
    "j3_2": ("J3.2", "J3", True, "table of marks library, degree-6156 action"),
}

# normalizing overgroup used for conjugacy dedup in lattice search
OVERGROUP = {"a6": "aut_a6", "s6": "aut_a6", "m10": "aut_a6", "pgl2_9": "aut_a6"}

# export row name -> (row, E label, A label, H label, S label, expected kind)
A6_ROWS = {
    "a6.row1": (1, "S4", "A4", "A5", "G", "K6"),
    "s6.row1": (2, "S4xS2", "S4", "S5", "G", "K6"),
    "m10.row3": (3, "5:4", "5:2", "A5", "A6", "K6,6"),
    "m10.row1": (4, "8:2", "D8", "S4", "A6", "tutte_8_cage"),
    "m10.row2": (5, "8:2", "Q8", "3^2:Q8", "G", "K10"),
    "pgl2_9.row3": (6, "D20", "D10", "A5", "A6", "K6,6"),
    "pgl2_9.row1": (7, "D16", "D8", "S4", "A6", "tutte_8_cage"),
    "pgl2_9.row2": (8, "D16", "8", "3^2:8", "G", "K10"),
    "aut_a6.row3": (9, "10:4", "AGL1(5)", "S5", "S6", "K6,6"),
    "aut_a6.row1": (10, "[2^5]", "[2^4]", "S4xS2", "S6", "tutte_8_cage"),
    "aut_a6.row2": (11, "[2^5]", "[2^4]", "3^2:[2^4]", "G", "K10"),
}

KIND_EXPECTED = {
    "K6": dict(order=6, size=15, valency=5, girth=3, bipartite=False),
    "K10": dict(order=10, size=45, valency=9, girth=3, bipartite=False),
    "K6,6": dict(order=12, size=36, valency=6, girth=4, bipartite=True),
    "tutte_8_cage": dict(order=30, size=45, valency=3, girth=8, bipartite=True, max_s=5,
                         biprimitive=True),
}

# index-2 subgroups of Aut(A6) have 720 < 1440 = #5-arcs of the 8-cage
ROW_OVERRIDES = {4: {"max_s": 4}, 7: {"max_s": 4}}

OTHER_LATTICES = {
    "gamma1": ("s8.gamma1", "S2 wr S4", "(S2 wr S4) n A8", "AGL3(2)", "G",
               dict(order=30, size=105, valency=7, girth=4, bipartite=True, max_s=2,
                    local_two_transitive=True)),
    "m12_2_weiss": ("m12_2.lattice", "3^{1+2}:D8", "3^{1+2}:2^2", "3^2:2S4", "M12",
                    dict(order=440, size=880, valency=4, max_s_min=3)),
    "j3_2_weiss": ("j3_2.lattice", "[2^6]:(S3)^2", "[2^6]:((S3)^2 n A6)", "[2^4]:(3xA5).2", "G",
                   dict(order=17442, size=43605, valency=5, max_s_min=3)),
    "j1": ("j1.lattice", "7:6", "7:3", "2^3:7:3", "G",
           dict(order=1045, size=4180, valency=8, max_s=2, two_arc_stabilizer=3)),
    "hoffman_singleton": ("psu3_5_2.lattice", "Aut(A6)", "S6", "S7", "G",
                          dict(order=50, size=175, valency=7, girth=5, bipartite=False,
                               max_s_min=3)),
}

NONCONSTRUCTIBLE = [
    dict(name="ru", label="Ru", socle="Ru", order=145926144000, H_order=12000,
         H_label="5^2:GL2(5)", E_label="5^{1+2}:[2^5]", A_label="5^{1+2}:[2^4]", S_label="G"),
    dict(name="on_2", label="O'N.2", socle="O'N", order=921631011840, H_order=2520,
         H_label="A7", E_label="PGL2(9)", A_label="A6", S_label="O'N"),
]

CLASSICAL = [
    ("psl6_gamma_delta3", "PSL6(q).<gamma,delta^3>", "PSL", 6, 7, "q=p = 7,13 mod 24", 5040),
    ("psl6_gamma", "PSL6(q).<gamma>", "PSL", 6, 31, "q=p = 1,31 mod 48", 2520),
    ("psl6_gamma_delta", "PSL6(q).<gamma delta>", "PSL", 6, 7, "q=p = 7,25 mod 48", 2520),
    ("psl6_phi_gamma_delta3", "PSL6(q).<phi,gamma delta^3>", "PSL", 6, 25,
     "q=p^2, p = 5,11 mod 24", 5040),
    ("psl6_phigamma_gamma_delta3", "PSL6(q).<phi gamma,gamma delta^3>", "PSL", 6, 169,
     "q=p^2, p = 13,19 mod 24", 5040),
    ("psu6_gamma_delta3", "PSU6(q).<gamma,delta^3>", "PSU", 6, 11, "q=p = 11,17 mod 24", 5040),
    ("psu6_gamma", "PSU6(q).<gamma>", "PSU", 6, 17, "q=p = 17,47 mod 48", 2520),
    ("psu6_gamma_delta", "PSU6(q).<gamma delta>", "PSU", 6, 23, "q=p = 23,41 mod 48", 2520),
    ("pomega10m_gamma_delta1", "POmega-10(7).<gamma,delta'>", "POmega-", 10, 7, "q=7", 5040),
]


def parse_export(path):
    groups, subs = {}, {}
    cur = None
    for line in Path(path).read_text().splitlines():
        tag, _, rest = line.partition(" ")
        if tag == "DEGREE":
            name, deg = rest.split()
            groups[name] = {"degree": int(deg)}
        elif tag in ("GROUP", "SUB"):
            name, order = rest.split()
            cur = {"order": order, "gens": []}
            (groups[name].update(cur) if tag == "GROUP" else subs.__setitem__(name, cur))
            cur = groups[name] if tag == "GROUP" else subs[name]
        elif tag == "GEN":
            cur["gens"].append(re.sub(r"\s+", "", rest))
        elif tag == "END":
            cur = None
    return groups, subs


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("export")
    ap.add_argument("outdir", type=Path)
    args = ap.parse_args()
    groups, subs = parse_export(args.export)

    group_subs = {name: [] for name in groups}
    lattices = {}

    def add_sub(parent, subname, role, label, src):
        data = subs[src]
        group_subs[parent].append({
            "name": subname, "role": role, "generators": data["gens"] or ["()"],
            "claimed_order": data["order"], "structure_label": label,
        })
        return f"{parent}/{subname}"

    for src, (row, el, al, hl, sl, kind) in A6_ROWS.items():
        parent = src.split(".")[0]
        tag = f"row{row}"
        refs = [add_sub(parent, f"{tag}_{r}", r, lab, f"{src}.{r}")
                for r, lab in (("E", el), ("A", al), ("H", hl))]
        expected = dict(KIND_EXPECTED[kind], edge_primitive=True, S_label=sl, kind=kind)
        expected.update(ROW_OVERRIDES.get(row, {}))
        lattices[f"a6_row{row:02d}"] = {
            "name": f"a6_row{row:02d}", "group_ref": parent,
            "E_ref": refs[0], "A_ref": refs[1], "H_ref": refs[2],
            "row": row, "expected": expected,
        }

    for lname, (src, el, al, hl, sl, exp) in OTHER_LATTICES.items():
        parent = src.split(".")[0]
        tag = lname
        refs = [add_sub(parent, f"{tag}_{r}", r, lab, f"{src}.{r}")
                for r, lab in (("E", el), ("A", al), ("H", hl))]
        lattices[lname] = {
            "name": lname, "group_ref": parent,
            "E_ref": refs[0], "A_ref": refs[1], "H_ref": refs[2],
            "expected": dict(exp, edge_primitive=True, S_label=sl),
        }

    gdir = args.outdir / "groups"
    ldir = args.outdir / "lattices"
    sdir = args.outdir / "nonconstructible"
    sdir.mkdir(parents=True, exist_ok=True)
    gdir.mkdir(parents=True, exist_ok=True)
    ldir.mkdir(parents=True, exist_ok=True)

    for name, g in groups.items():
        label, socle, simple_flag, source = GROUP_META[name]
        entry = {
            "schema_version": SCHEMA_VERSION, "name": name, "label": label,
            "degree": g["degree"], "generators": g["gens"], "claimed_order": g["order"],
            "metadata": {"socle": socle, "almost_simple": simple_flag, "source": source,
                         "constructible": True},
            "subgroups": sorted(group_subs[name], key=lambda s: s["name"]),
        }
        if name in OVERGROUP:
            entry["metadata"]["overgroup"] = OVERGROUP[name]
        (gdir / f"{name}.json").write_text(json.dumps(entry, indent=1) + "\n")

    for e in NONCONSTRUCTIBLE:
        entry = {
            "schema_version": SCHEMA_VERSION, "name": e["name"], "label": e["label"],
            "degree": None, "generators": [], "claimed_order": str(e["order"]),
            "metadata": {"socle": e["socle"], "almost_simple": True, "constructible": False,
                         "source": "orders only",
                         "lattice": {"E": e["E_label"], "A": e["A_label"], "H": e["H_label"],
                                     "S": e["S_label"], "H_order": str(e["H_order"])}},
            "subgroups": [],
        }
        (sdir / f"{e['name']}.json").write_text(json.dumps(entry, indent=1) + "\n")

    for name, label, family, n, q, cond, h_order in CLASSICAL:
        entry = {
            "schema_version": SCHEMA_VERSION, "name": name, "label": label,
            "degree": None, "generators": [], "claimed_order": None,
            "metadata": {"socle": f"{family}{n}(q)", "almost_simple": True, "constructible": False,
                         "source": "orders only",
                         "family": {"type": family, "n": n, "smallest_q": q, "conditions": cond},
                         "lattice": {"H_order": str(h_order)}},
            "subgroups": [],
        }
        (sdir / f"{name}.json").write_text(json.dumps(entry, indent=1) + "\n")

    for name, lat in lattices.items():
        lat = dict(lat, schema_version=SCHEMA_VERSION)
        (ldir / f"{name}.json").write_text(json.dumps(lat, indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
