"""Scenario catalog: each entry maps a config section to module operations and checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .certificates import _plain as plain
from .config import ConfigError, Param
from .construction import InfeasibleError, ricci_glued, run_theorem2
from .curvature import MetricChart, ricci_eigenvalues
from .submersion.fprofile import HALF_PI, InfeasibleProfileError
from .submersion.gao import (
    R_CP_DEFAULT,
    GaoBlend,
    cap_metric,
    check_positive_definite,
    cp_ball_metric,
    default_step,
    gao_ricci_scan,
    jet_match_check,
    s_point,
    s_ricci_oracle,
    s_ricci_unit_check,
)
from .submersion.pipeline import blowup_pipeline
from .submersion.triple import (
    TripleSphereMetric,
    degenerate_directions,
    flat_fields,
    coordinate_index,
    horizontality_check,
    min_pairing_on_subspace,
    oneill_scan,
    sample_generic_points,
    stratum_point,
    swap_defect,
    vertical_rank,
)
from .toric import (
    NAMED_ACTIONS,
    NAMED_POLYTOPES,
    TorusWeightSystem,
    all_strata,
    brute_force_stabilizer,
    cube,
    cut_face,
    format_element,
    format_group,
    freeness_scan,
    moment_angle_dims,
    stratum_stabilizer,
)
from .validation import (
    calabi_check,
    einstein_check,
    hf_convergence_order,
    hf_oracle_check,
    squashed_fs_metric,
)
from .warped import calabi_phi, einstein_constant, fubini_study_metric, phi_R, ricci_phi

# tolerances fixed by the acceptance criteria
HF_REL_TOL = 1e-5
HF_MIN_ORDER = 1.8
ZERO_TOL = 1e-10
OUTSIDE_MIN = 1e-4
SUM_TOL = 1e-9
SMOOTH_TOL = 1e-6
ORACLE_STEP = 3e-4


@dataclass
class Outcome:
    checks: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    profiles: list = field(default_factory=list)
    scan: list = field(default_factory=list)

    def merge(self, prefix: str, other: "Outcome") -> None:
        self.checks.update({f"{prefix}.{k}": v for k, v in other.checks.items()})
        self.results[prefix] = other.results
        self.profiles += [{"scenario": prefix, **r} for r in other.profiles]
        self.scan += [{"scenario": prefix, **r} for r in other.scan]


@dataclass(frozen=True)
class Scenario:
    name: str
    anchor: str
    description: str
    schema: dict
    runner: Callable

    def catalog_entry(self) -> dict:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "description": self.description,
            "params": {k: {"kind": p.kind, "default": plain(p.default), "rule": p.rule}
                       for k, p in self.schema.items()},
        }


def _pos(v) -> bool:
    return v > 0


def _all_pos(vs) -> bool:
    return len(vs) > 0 and all(v > 0 for v in vs)


# -- declarative weight systems and polytopes ------------------------------------


def parse_action(text: str) -> TorusWeightSystem:
    """A named action or 'u1: 1 0 0; v1: 1 1 -1; ...' (one weight row per coordinate)."""
    text = text.strip()
    if text in NAMED_ACTIONS:
        return NAMED_ACTIONS[text]()
    rows = {}
    try:
        for item in filter(None, (s.strip() for s in text.split(";"))):
            label, weights = item.split(":")
            rows[label.strip()] = [int(w) for w in weights.replace(",", " ").split()]
        return TorusWeightSystem.from_rows(rows, name="custom")
    except ValueError as exc:
        raise ConfigError(f"cannot read weight system {text!r}: {exc}") from None


def parse_polytope(text: str):
    """A named polytope or 'cube | x0 y0 | x1 z1' (faces of the cube cut in order)."""
    text = text.strip()
    if text in NAMED_POLYTOPES:
        return NAMED_POLYTOPES[text]()
    head, *cuts = [s.strip() for s in text.split("|")]
    if head != "cube":
        raise ConfigError(f"unknown polytope {text!r}; use one of {sorted(NAMED_POLYTOPES)} or 'cube | ...'")
    P = cube()
    try:
        for c in cuts:
            P = cut_face(P, tuple(c.replace(",", " ").split()))
    except ValueError as exc:
        raise ConfigError(f"cannot build polytope {text!r}: {exc}") from None
    return P


# -- lemma1 / lemma2 -----------------------------------------------------------


def _stratum_rows(action: TorusWeightSystem, n_max: int) -> tuple[list, dict]:
    rows, groups = [], {}
    for s in all_strata(action.n_spheres):
        G = stratum_stabilizer(action, s)
        brute = brute_force_stabilizer(action, s, n_max)
        elems = sorted(format_element(e) for e in (G.elements or ()))
        groups[str(s)] = (G, brute, elems)
        rows.append({
            "stratum": str(s), "vanishing": s.describe(), "group": format_group(G),
            "brute_force": "indeterminate" if brute is None else format_group(brute),
            "elements": " ".join(elems),
        })
    return rows, groups


def _brute_agrees(groups: dict) -> bool:
    # brute force only sees finite groups; a rank-deficient stratum is reported as indeterminate
    return all(b is None and G.free_rank > 0 or b is not None and b == G for G, b, _ in groups.values())


def run_lemma1(p: dict, seed: int) -> Outcome:
    action = parse_action(p["action"])
    rows, groups = _stratum_rows(action, p["n_max"])
    nontrivial = {k: v for k, v in groups.items() if not v[0].is_trivial}
    out = Outcome(scan=rows)
    out.results = {
        "action": action.name, "weights": [list(r) for r in action.weights],
        "nontrivial": {k: {"group": format_group(G), "elements": e} for k, (G, _, e) in nontrivial.items()},
    }
    out.checks["brute_force_agrees"] = _brute_agrees(groups)
    if p["action"] == "example2":
        out.checks["single_nontrivial_stratum"] = list(nontrivial) == ["vvv"]
        out.checks["stabilizer_is_Z3"] = all(format_group(G) == "Z_3" for G, _, _ in nontrivial.values())
    return out


F1_STRATA = ("gvv", "uvv", "vvv")  # v2 = v3 = 0
F2_STRATA = ("uug", "uuu", "uuv")  # u1 = u2 = 0
F1_ELEMENT = "(1, -1, -1)"  # (1, ±(1, 1))
F2_ELEMENT = "(-1, -1, 1)"  # (±(1, 1), 1)
IDENTITY = "(1, 1, 1)"


def run_lemma2(p: dict, seed: int) -> Outcome:
    action = parse_action(p["action"])
    rows, groups = _stratum_rows(action, p["n_max"])
    nontrivial = {k: v for k, v in groups.items() if not v[0].is_trivial}
    for r in rows:
        r["set"] = "F1" if r["stratum"] in F1_STRATA else "F2" if r["stratum"] in F2_STRATA else ""
    dims = {}
    for text in p["polytopes"].split(";"):
        P = parse_polytope(text)
        d, k = moment_angle_dims(P)
        dims[text.strip()] = {"m": P.m, "dim_Z": d, "torus_rank": k}
    out = Outcome(scan=rows)
    out.results = {
        "action": action.name,
        "nontrivial": {k: {"group": format_group(G), "elements": e} for k, (G, _, e) in nontrivial.items()},
        "moment_angle": dims,
    }
    out.checks["brute_force_agrees"] = _brute_agrees(groups)
    if p["action"] == "example3":
        out.checks["strata_are_F1_F2"] = sorted(nontrivial) == sorted(F1_STRATA + F2_STRATA)
        out.checks["all_Z2"] = all(format_group(G) == "Z_2" for G, _, _ in nontrivial.values())
        out.checks["F1_elements"] = all(nontrivial.get(s, (0, 0, []))[2] == sorted([F1_ELEMENT, IDENTITY])
                                        for s in F1_STRATA)
        out.checks["F2_elements"] = all(nontrivial.get(s, (0, 0, []))[2] == sorted([F2_ELEMENT, IDENTITY])
                                        for s in F2_STRATA)
    expected = {"Q1": (11, 17), "Q2": (4, 10), "Q3": (5, 11)}  # (torus rank, dim Z_P)
    for name, (k, d) in expected.items():
        if name in dims:
            out.checks[f"{name}_dims"] = dims[name]["torus_rank"] == k and dims[name]["dim_Z"] == d
    return out


# -- einstein / calabi ---------------------------------------------------------------


def run_einstein(p: dict, seed: int) -> Outcome:
    out = Outcome()
    res = []
    for n in p["n_values"]:
        for R in p["R_values"]:
            c = einstein_check(n, R, p["n_points"], seed)
            res.append(c)
            out.checks[f"einstein_n{n}_R{R:g}"] = c["pass"]
            out.scan.append({"kind": "einstein", **{k: v for k, v in c.items() if k != "pass"}, "pass": c["pass"]})
            r = np.linspace(0.01 * R, 0.99 * R, p["profile_points"])
            ph = phi_R(R, n)
            ric = ricci_phi(ph, r)
            for i, ri in enumerate(r):
                out.profiles.append({"n": n, "R": R, "r": ri, "phi": float(ph.phi(ri)), "ric01": ric[0][i],
                                     "ric2": ric[1][i], "lambda": einstein_constant(R, n)})
    # closed-form Ricci of the cohomogeneity-one ansatz against the oracle, n = 2
    hf = {}
    R = p["hf_R"]
    lo, hi = 0.15 * R, 0.85 * R * np.pi / 2
    for name, w in (("fubini_study", fubini_study_metric(R, 2)), ("squashed", squashed_fs_metric(R, 2, p["squash"]))):
        chk = hf_oracle_check(w, lo, hi, p["hf_points"], seed)
        order = hf_convergence_order(w, lo, hi, seed=seed + 1)
        hf[name] = {**chk, **order}
        out.checks[f"hf_{name}_rel_error"] = chk["max_rel_error"] <= HF_REL_TOL
        out.checks[f"hf_{name}_order"] = order["order"] >= HF_MIN_ORDER
    out.results = {"einstein": res, "hf": hf}
    return out


def run_calabi(p: dict, seed: int) -> Outcome:
    out = Outcome()
    res = []
    for n in p["n_values"]:
        c = calabi_check(n, p["r_lo"], p["r_hi"], p["n_points"], seed)
        res.append(c)
        out.checks[f"calabi_n{n}"] = c["pass"]
        out.scan.append({"kind": "calabi", **{k: v for k, v in c.items() if k != "pass"}, "pass": c["pass"]})
        ph = calabi_phi(n, b=p["r_hi"] * 1.1)
        r = np.linspace(p["r_lo"], p["r_hi"], p["profile_points"])
        ric = ricci_phi(ph, r)
        for i, ri in enumerate(r):
            out.profiles.append({"n": n, "r": ri, "phi": float(ph.phi(ri)), "ric01": ric[0][i],
                                 "ric2": ric[1][i]})
    out.results = {"calabi": res}
    return out


# -- theorem2 ----------------------------------------------------------------------


def run_theorem2_scenario(p: dict, seed: int) -> Outcome:
    n, R = p["n"], p["R"]
    try:
        res = run_theorem2(n, R, p["kappa"], p["nu"], p["num"])
    except InfeasibleError as exc:
        return Outcome(checks={"feasible": False}, results={"error": str(exc)})
    out = Outcome()
    for k, v in res.psi.checks.items():
        out.checks[f"psi_{k}"] = bool(v["pass"])
    pc = res.phi_checks
    out.checks["phi_at_1"] = abs(pc["phi_at_1"] - 1) <= 1e-8
    out.checks["dphi_at_1"] = abs(pc["dphi_at_1"] + 2 * n) <= 1e-8
    out.checks["tail"] = pc["tail_dev"] <= 1e-9
    cert = res.certificate
    for k, v in cert.checks.items():
        if v is not None:
            out.checks[f"bound_{k}"] = bool(v)
    out.checks["sigma_positive"] = cert.sigma > 0
    out.checks["certificate"] = cert.passed
    s0, s1 = res.smoothness
    out.checks["smoothness"] = abs(s0) <= SMOOTH_TOL and abs(s1 - n) <= SMOOTH_TOL
    if n >= 3:
        out.checks["size_bound"] = res.size is not None and res.size.holds
    out.results = res.summary()

    g = res.glued
    r = np.linspace(1.0, R, p["profile_points"])
    psi = res.psi.profile
    rp = np.clip(r, psi.a, psi.b)
    vals = {"r": r, "phi": g.phi.phi(r), "dphi": g.phi.phi(r, 1), "psi": psi(rp), "delta": g.delta(r)}
    for i in range(r.size):
        out.profiles.append({k: v[i] for k, v in vals.items()})
    ri = np.linspace(1.0, R, p["num"])[1:-1]
    ric = np.stack(ricci_glued(g, ri))
    for i in range(ri.size):
        out.scan.append({"r": ri[i], "ric0": ric[0, i], "ric1": ric[1, i], "ric2": ric[2, i],
                         "min_R2": float(ric[:, i].min() * R**2)})
    return out


# -- example3 ------------------------------------------------------------------------


def _grid_axis(eps: float, size: int) -> np.ndarray:
    edge = 0.02
    return np.union1d(np.linspace(edge, HALF_PI - edge, size), [eps / 2, HALF_PI - eps / 2])


def run_example3(p: dict, seed: int) -> Outcome:
    eps = p["eps"]
    try:
        m = TripleSphereMetric.from_eps(eps)
    except InfeasibleProfileError as exc:
        return Outcome(checks={"f_profile": False}, results={"error": str(exc)})
    out = Outcome()
    # degenerate directions on a grid in (t1, t2, t3)
    ax = _grid_axis(eps, p["grid"])
    T = np.stack(np.meshgrid(ax, ax, ax, indexing="ij"), axis=-1).reshape(-1, 3)
    pts = np.concatenate([T, np.zeros((T.shape[0], 6))], axis=1)
    U = m.unit_ricci(pts)
    n_inside = 0
    zero_max, match, out_min, pair_min, ever_horizontal = 0.0, True, np.inf, np.inf, False
    for x, u in zip(pts, U):
        flat = [coordinate_index(f) for f in flat_fields(m, x)]
        zeros = set(np.flatnonzero(np.abs(u) <= ZERO_TOL).tolist())
        match &= zeros == set(flat)
        if flat:
            n_inside += 1
            zero_max = max(zero_max, float(np.max(np.abs(u[flat]))))
            for fam in degenerate_directions(m, x):
                pair_min = min(pair_min, min_pairing_on_subspace(m, x, fam.basis()))
                ever_horizontal |= any(horizontality_check(m, x, e)[0] for e in fam.basis())
        else:
            out_min = min(out_min, float(u.min()))
    out.checks["zero_inside"] = zero_max <= ZERO_TOL
    out.checks["zero_set_matches_cases"] = bool(match)
    out.checks["positive_outside"] = out_min >= OUTSIDE_MIN
    out.checks["never_horizontal"] = (not ever_horizontal) and pair_min > 0
    out.checks["ricci_nonnegative"] = float(U.min()) >= -ZERO_TOL

    # oracle and swap isometry at seeded generic points
    rng = np.random.default_rng(seed)
    # away from the C^2 joints at eps and pi/2 - eps, where finite differences lose accuracy
    spot = sample_generic_points(p["oracle_points"], rng, margin=eps + 0.05)
    ev = ricci_eigenvalues(m.chart(), spot, step=ORACLE_STEP, extrapolate=True)
    oracle_dev = float(np.max(np.abs(ev - np.sort(m.unit_ricci(spot), axis=-1))))
    swap = max(swap_defect(m, x) for x in spot)
    out.checks["oracle_agrees"] = oracle_dev <= 1e-5
    out.checks["swap_isometry"] = swap <= 1e-12

    # vertical rank on every stratum equals 3 minus the stabilizer's circle rank
    ranks = {}
    for s in all_strata(3):
        G = stratum_stabilizer(m.action, s)
        ranks[str(s)] = (vertical_rank(m, stratum_point(s)), m.action.torus_rank - G.free_rank)
    out.checks["vertical_rank"] = all(a == b for a, b in ranks.values())

    scan = oneill_scan(m, p["n_samples"], seed)
    cert = scan.certificate(f"oneill eps={eps:g}", {"eps": eps, "n_samples": p["n_samples"], "seed": seed}, SUM_TOL)
    out.checks.update({f"oneill_{k}": v for k, v in cert.checks.items()})
    out.checks["oneill_sample_count"] = len(scan.samples) >= 1000 or p["n_samples"] < 1000
    out.scan = scan.rows()

    t = np.linspace(0.0, HALF_PI, p["profile_points"])
    v, d1, d2 = m.fprof.jet(t)
    out.profiles = [{"t": t[i], "f": v[i], "df": d1[i], "ddf": d2[i]} for i in range(t.size)]
    out.results = {
        "grid": {"axis": ax, "n_points": int(pts.shape[0]), "n_inside": n_inside},
        "zero_max_inside": zero_max, "min_eigenvalue_outside": out_min, "min_pairing": pair_min,
        "min_ricci": float(U.min()), "oracle_max_dev": oracle_dev, "swap_defect": swap,
        "vertical_rank": {k: list(v) for k, v in ranks.items()},
        "oneill": cert.to_dict(),
    }
    return out


# -- gao -------------------------------------------------------------------------------


def run_gao(p: dict, seed: int) -> Outcome:
    eps, R = p["eps"], p["R"]
    rho2, rho1 = eps / 4, eps / 2
    out = Outcome()
    jets = jet_match_check(cap_metric, cp_ball_metric(R))
    out.checks["jets"] = jets.passed
    scan = gao_ricci_scan(eps, R)
    out.checks["ricci_positive"] = scan.positive
    blend = GaoBlend(cap_metric, cp_ball_metric(R), rho1, rho2, default_step)
    chart = MetricChart(blend, [-1.0] * 4, [1.0] * 4, name="gao")
    min_g = check_positive_definite(chart, scan.points)
    # equality with the inputs off the annulus, including its edges
    rng = np.random.default_rng(seed)
    th = rng.uniform(0, np.pi, p["identity_points"])
    a, b = rng.uniform(0, 2 * np.pi, (2, p["identity_points"]))
    t_in = np.r_[rng.uniform(0, rho2, p["identity_points"]), rho2]
    t_out = np.r_[rng.uniform(rho1, 3 * rho1, p["identity_points"]), rho1]
    xin = s_point(t_in, np.r_[th, 0.5], np.r_[a, 0.1], np.r_[b, 0.2])
    xout = s_point(t_out, np.r_[th, 0.5], np.r_[a, 0.1], np.r_[b, 0.2])
    xin = xin[np.linalg.norm(xin, axis=-1) <= rho2]
    xout = xout[np.linalg.norm(xout, axis=-1) >= rho1]
    inner_eq = bool(np.array_equal(blend(xin), cp_ball_metric(R)(xin)))
    outer_eq = bool(np.array_equal(blend(xout), cap_metric(xout)))
    out.checks["identical_inside_rho2"] = inner_eq
    out.checks["identical_outside_rho1"] = outer_eq
    # S itself has Ric = g
    probe = s_point(0.6, 1.1, 0.3, 1.7)
    s_closed = s_ricci_unit_check(probe)
    s_oracle = float(np.max(np.abs(s_ricci_oracle(probe) - 1)))
    out.checks["S_einstein"] = s_closed <= 1e-12 and s_oracle <= 1e-5
    t = np.linspace(0.0, 0.6 * eps, p["profile_points"])
    ray = s_point(t, np.full_like(t, 1.0), 0.3, 1.0)
    G = blend(ray)
    s = blend.s(ray)
    out.profiles = [{"t": t[i], "s": s[i], "g_min_eig": float(np.linalg.eigvalsh(G[i])[0])} for i in range(t.size)]
    r = np.linalg.norm(scan.points, axis=-1)
    out.scan = [{"radius": r[i], **{f"x{k}": scan.points[i, k] for k in range(4)},
                 "ric_min": scan.min_eigenvalues[i]} for i in range(r.size)]
    out.results = {
        "rho1": rho1, "rho2": rho2, "R": R,
        "jets": {"value_gap": jets.value_gap, "derivative_gap": jets.derivative_gap, "tol": jets.tol},
        "ricci_scan": scan.summary(), "min_metric_eigenvalue": min_g,
        "identity_points": {"inside": int(xin.shape[0]), "outside": int(xout.shape[0])},
        "S_check": {"closed_form": s_closed, "oracle": s_oracle},
    }
    return out


# -- full ---------------------------------------------------------------------------------


def run_full(p: dict, seed: int, sub_params: dict | None = None) -> Outcome:
    out = Outcome()
    sub_params = sub_params or {}
    for name in ("lemma1", "lemma2", "einstein", "calabi", "theorem2", "example3", "gao"):
        sc = SCENARIOS[name]
        params = sub_params.get(name) or {k: q.default for k, q in sc.schema.items()}
        out.merge(name, sc.runner(params, seed))
    if p["blowup"]:
        cert = blowup_pipeline(p["blowup_eps"], p["blowup_samples"], seed, p["blowup_R"], p["blowup_pole"])
        out.checks.update({f"blowup.{k}": v for k, v in cert.checks.items()})
        out.results["blowup"] = cert.to_dict()
    return out


# -- catalog ------------------------------------------------------------------------------

_ACTION_RULE = "named action or 'u1: w w w; v1: ...'"

SCENARIOS: dict[str, Scenario] = {}


def _register(name, anchor, description, schema, runner):
    SCENARIOS[name] = Scenario(name, anchor, description, schema, runner)


_register(
    "lemma1", "Lemma 1",
    "Stabilizer strata of the Example-2 torus action; brute-force cross-check",
    {
        "action": Param("str", "example2", lambda v: bool(v.strip()), _ACTION_RULE),
        "n_max": Param("int", 6, lambda v: 2 <= v <= 12, "2 <= n_max <= 12"),
    },
    run_lemma1,
)
_register(
    "lemma2", "Lemma 2 and Theorem 1",
    "Non-free strata F1, F2 of the Example-3 action and moment-angle bookkeeping for Q1, Q2, Q3",
    {
        "action": Param("str", "example3", lambda v: bool(v.strip()), _ACTION_RULE),
        "n_max": Param("int", 6, lambda v: 2 <= v <= 12, "2 <= n_max <= 12"),
        "polytopes": Param("str", "Q1; Q2; Q3", lambda v: bool(v.strip()), "';'-separated polytope specs"),
    },
    run_lemma2,
)
_register(
    "einstein", "Lemma 3 and Lemma 4",
    "Fubini-Study in the phi form is Einstein; closed-form cohomogeneity-one Ricci against the oracle",
    {
        "n_values": Param("ints", [2, 3], lambda v: bool(v) and all(k >= 2 for k in v), "each n >= 2"),
        "R_values": Param("floats", [1.0, 2.0, 5.0], _all_pos, "each R > 0"),
        "n_points": Param("int", 100, lambda v: v >= 10, ">= 10"),
        "profile_points": Param("int", 101, lambda v: v >= 2, ">= 2"),
        "hf_R": Param("float", 2.0, _pos, "> 0"),
        "hf_points": Param("int", 500, lambda v: v >= 500, ">= 500"),
        "squash": Param("float", 0.8, lambda v: 0.5 <= v <= 1.0, "0.5 <= squash <= 1"),
    },
    run_einstein,
)
_register(
    "calabi", "Remark 1",
    "psi = 0 gives the Ricci-flat Calabi metric",
    {
        "n_values": Param("ints", [2, 3], lambda v: bool(v) and all(k >= 2 for k in v), "each n >= 2"),
        "r_lo": Param("float", 1.05, lambda v: v > 1, "> 1"),
        "r_hi": Param("float", 10.0, _pos, "> r_lo"),
        "n_points": Param("int", 100, lambda v: v >= 10, ">= 10"),
        "profile_points": Param("int", 101, lambda v: v >= 2, ">= 2"),
    },
    run_calabi,
)
_register(
    "theorem2", "Theorem 2",
    "psi_n, phi_n and delta_nu construction with the positivity certificate and size bound",
    {
        "n": Param("int", 3, lambda v: v >= 2, "n >= 2"),
        "R": Param("float", 9.0, lambda v: v > 4, "R > 4"),
        "kappa": Param("float", 1.0, _pos, "kappa > 0"),
        "nu": Param("optional_float", None, lambda v: v >= 0, "nu >= 0 or auto"),
        "num": Param("int", 4001, lambda v: v >= 101, ">= 101"),
        "profile_points": Param("int", 401, lambda v: v >= 2, ">= 2"),
    },
    run_theorem2_scenario,
)
_register(
    "example3", "Example 3 and Lemma 4",
    "Triple-sphere metric: degenerate Ricci directions, horizontality and the O'Neill quotient scan",
    {
        "eps": Param("float", 0.1, lambda v: 0 < v < np.pi / 8, "0 < eps < pi/8"),
        "grid": Param("int", 12, lambda v: v >= 3, ">= 3"),
        "oracle_points": Param("int", 5, lambda v: v >= 1, ">= 1"),
        "n_samples": Param("int", 1000, lambda v: v >= 1, ">= 1"),
        "profile_points": Param("int", 201, lambda v: v >= 2, ">= 2"),
    },
    run_example3,
)
_register(
    "gao", "Theorem 4",
    "S-cap / CP2-ball interpolation with matching 1-jets",
    {
        "eps": Param("float", 0.1, lambda v: 0 < v <= 0.2, "0 < eps <= 0.2"),
        "R": Param("float", R_CP_DEFAULT, _pos, "R > 0"),
        "identity_points": Param("int", 200, lambda v: v >= 1, ">= 1"),
        "profile_points": Param("int", 121, lambda v: v >= 2, ">= 2"),
    },
    run_gao,
)
_register(
    "full", "Theorem 1",
    "Every scenario above plus the resolved-region positivity pipeline",
    {
        "blowup": Param("int", 1, lambda v: v in (0, 1), "0 or 1"),
        "blowup_eps": Param("float", 0.1, lambda v: 0 < v <= 0.1, "0 < eps <= 0.1"),
        "blowup_R": Param("float", R_CP_DEFAULT, _pos, "R > 0"),
        "blowup_samples": Param("int", 1000, lambda v: v >= 1, ">= 1"),
        "blowup_pole": Param("int", 32, lambda v: v >= 1, ">= 1"),
    },
    run_full,
)


def list_scenarios() -> list[dict]:
    return [SCENARIOS[k].catalog_entry() for k in SCENARIOS]


def get_scenario(name: str) -> Scenario:
    if name not in SCENARIOS:
        raise ConfigError(f"unknown scenario {name!r}; available: {', '.join(SCENARIOS)} (see 'list')")
    return SCENARIOS[name]
