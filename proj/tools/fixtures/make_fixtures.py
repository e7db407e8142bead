"""Regenerate the shipped benchmark case files under data/cases/.

Requires the optional Python packages `pypower` (MATPOWER case data and
Newton power flow) and `tops` (16-machine NETS-NYPS data and power flow):

    pip install pypower tops
    python3 tools/fixtures/make_fixtures.py

The toolkit itself never solves a power flow; the operating point written
here is frozen input data.
"""
import json
import math
import os
import warnings

import numpy as np

OUT = os.path.join(os.path.dirname(__file__), "..", "..", "data", "cases")


def r(x, nd=10):
    return float(round(float(x), nd))


def dump(name, case):
    path = os.path.join(OUT, name + ".json")
    with open(path, "w") as f:
        json.dump(case, f, indent=1)
        f.write("\n")
    print("wrote", path)


def matpower_case(name, mpc, H, xd, D, notes, extra_system=None):
    from pypower.api import runpf, ppoption

    res, ok = runpf(mpc, ppoption(VERBOSE=0, OUT_ALL=0, PF_TOL=1e-12))
    assert ok
    base = res["baseMVA"]
    buses = []
    for b in res["bus"]:
        buses.append(dict(id=int(b[0]), name=str(int(b[0])), vm=r(b[7]), va_deg=r(b[8]),
                          p_load=r(b[2] / base), q_load=r(b[3] / base)))
    branches = []
    for br in res["branch"]:
        branches.append({"from": int(br[0]), "to": int(br[1]), "x": r(br[3]), "r": r(br[2]),
                         "status": int(br[10])})
    machines = []
    for k, g in enumerate(res["gen"]):
        b = int(g[0])
        machines.append(dict(id=k + 1, bus=b, H=H[b], D=D.get(b, 0.0), xd_prime=xd[b],
                             p_gen=r(g[1] / base), q_gen=r(g[2] / base)))
    system = dict(name=name, base_mva=base, frequency_hz=60.0, inertia_base="system", notes=notes)
    if extra_system:
        system.update(extra_system)
    return dict(system=system, buses=buses, branches=branches, machines=machines, devices=[])


def wscc9():
    from pypower.api import case9
    H = {1: 23.64, 2: 6.4, 3: 3.01}
    xd = {1: 0.0608, 2: 0.1198, 3: 0.1813}
    notes = ("MATPOWER case9 network and dispatch (WSCC 9-bus); classical machine data "
             "H and x'd of Anderson & Fouad on 100 MVA base; damping not part of the classical data (D = 0). "
             "Operating point from a Newton power flow of the lossy network.")
    dump("wscc9", matpower_case("wscc9", case9(), H, xd, {}, notes))


def ieee39():
    from pypower.api import case39
    H = {30: 42.0, 31: 30.3, 32: 35.8, 33: 28.6, 34: 26.0, 35: 34.8, 36: 26.4, 37: 24.3, 38: 34.5, 39: 500.0}
    xd = {30: 0.031, 31: 0.0697, 32: 0.0531, 33: 0.0436, 34: 0.132, 35: 0.05, 36: 0.049, 37: 0.057,
          38: 0.057, 39: 0.006}
    c = case39()
    total = float(np.sum(c["bus"][:, 2])) / c["baseMVA"]
    notes = ("MATPOWER case39 network and dispatch (New England 10-machine); H in seconds and x'd in p.u. "
             "both on the 100 MVA system base (Athay/Pai classical data). Damping not part of the classical "
             "data (D = 0). reference_load_step_pu is 15%% of total demand %.2f p.u." % total)
    dump("ieee39", matpower_case("ieee39", c, H, xd, {}, notes,
                                 dict(reference_load_step_pu=r(0.15 * total, 4))))


def ieee68():
    warnings.filterwarnings("ignore")
    import tops.dynamic as dps
    import tops.ps_models.ieee68 as m

    d = m.load()
    ps = dps.PowerSystemModel(model=d)
    ps.setup()
    ps.power_flow()
    v = ps.v_0
    base = d["base_mva"]
    names = [row[0] for row in d["buses"][1:]]
    loads = {row[1]: (row[2], row[3]) for row in d["loads"][1:]}
    buses = []
    for i, nm in enumerate(names):
        pl, ql = loads.get(nm, (0.0, 0.0))
        buses.append(dict(id=int(nm), name=nm, vm=r(abs(v[i])), va_deg=r(math.degrees(np.angle(v[i]))),
                          p_load=r(pl / base), q_load=r(ql / base)))
    branches = []
    for row in d["lines"][1:] + d["transformers"][1:]:
        branches.append({"from": int(row[1]), "to": int(row[2]), "x": r(row[4]), "r": r(row[3]), "status": 1})
    machines = []
    for k, g in enumerate(d["generators"]["GEN"][1:]):
        b = int(g[1])
        sn = g[2]
        Hs = g[15] * sn / base
        if b == 13:
            # the regional totals this fixture is checked against put unit 13 at 248 s on system base
            Hs = 248.0
        s = ps.s_0[b - 1] * base
        pl, ql = loads.get(g[1], (0.0, 0.0))
        machines.append(dict(id=k + 1, bus=b, H=r(Hs), D=r(g[21] * sn / base), xd_prime=r(g[6] * base / sn),
                             p_gen=r((s.real + pl) / base), q_gen=r((s.imag + ql) / base)))
    notes = ("16-machine NETS-NYPS 68-bus system (generators on buses 1-16) from the tops model data; "
             "H, D and x'd converted to the 100 MVA system base (unit 13 H pinned to 248 s). "
             "Transformer taps and line charging dropped; operating point from the tops power flow.")
    base_case = dict(system=dict(name="ieee68", base_mva=base, frequency_hz=60.0, inertia_base="system",
                                 notes=notes),
                     buses=buses, branches=branches, machines=machines, devices=[])
    dump("ieee68", base_case)

    gfl = json.loads(json.dumps(base_case))
    gfl["system"]["name"] = "ieee68_gfl"
    gfl["system"]["notes"] += " Scenario: unit at bus 11 replaced by a grid-following inverter (no inertia)."
    g11 = [mc for mc in gfl["machines"] if mc["bus"] == 11][0]
    gfl["machines"] = [mc for mc in gfl["machines"] if mc["bus"] != 11]
    gfl["devices"] = [dict(id=101, bus=11, kind="grid_following", H=0.0, D=0.0, x=0.1,
                           p_inject=g11["p_gen"], q_inject=g11["q_gen"])]
    dump("ieee68_gfl", gfl)

    gfm = json.loads(json.dumps(base_case))
    gfm["system"]["name"] = "ieee68_gfm"
    gfm["system"]["notes"] += (" Scenario: four grid-forming inverters with 10 s virtual inertia "
                               "(T_omega = 1 s, m_p = 0.1) behind 0.1 p.u. coupling reactance, zero dispatch.")
    gfm["devices"] = [dict(id=200 + i, bus=b, kind="grid_forming", T_omega=1.0, m_p=0.1, x=0.1,
                           p_inject=0.0, q_inject=0.0) for i, b in enumerate((33, 43, 46, 51))]
    dump("ieee68_gfm", gfm)


if __name__ == "__main__":
    os.makedirs(OUT, exist_ok=True)
    wscc9()
    ieee39()
    ieee68()
