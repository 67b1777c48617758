"""Numerical self-checks against closed forms and exact discrete identities.

Each check returns a :class:`Check`; :func:`run_checks` runs them in order.
The CLI ``validate`` subcommand and the acceptance tests share this code.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import curve_fit

from . import filters as flt
from . import optics
from . import scenarios as scn
from . import states as st
from . import wigner as wg
from .grid import make_grid

__all__ = ["Check", "CHECKS", "QUICK_SKIP", "desk_grid", "run_checks"]

DESK_N = 1024
DESK_EXTENT = 64.0


def desk_grid():
    return make_grid(DESK_N, 0.0, DESK_EXTENT)


@dataclass
class Check:
    number: int
    name: str
    passed: bool
    detail: str
    values: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.name}: {self.detail}"


def _sup(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def _test_states(g):
    """Named states used by the identity checks."""
    det = optics.detector_transmittance(g, 2.4, 4.0)
    cat = st.double_slit_state(g, 4.0, 1.0)
    return {
        "gaussian": st.gaussian_state(g, 0.0, 1.0),
        "shifted gaussian": st.gaussian_state(g, 1.5, 0.7, p0=0.8),
        "chirped gaussian": st.gaussian_state(g, -0.5, 1.2, chirp=0.3),
        "cat": cat,
        "hermite 3": st.hermite_gauss_state(g, 3),
        "lens output": st.lens_output_state(g, 4.0, 1.0, 2.0, 3.0),
        "detector filtered cat": flt.apply_position_filter(cat, det).state_renorm,
    }


# --- 1-8: transforms and filters ----------------------------------------------


def check_gaussian_oracle() -> Check:
    g = desk_grid()
    W = wg.wigner_from_position(st.gaussian_state(g, 0.0, 1.0))
    Q, P = np.meshgrid(W.q, W.p, indexing="ij")
    err = _sup(W.w, st.analytic_gaussian_wdf(Q, P, 1.0))
    origin = float(W.w[g.n // 2, g.n // 2])
    ok = err <= 1e-9 and abs(origin - 1 / math.pi) <= 1e-9
    return Check(1, "Gaussian oracle", ok, f"sup error {err:.2e} (<= 1e-9), W(0,0) - 1/pi = {origin - 1 / math.pi:.2e}",
                 {"sup_error": err, "w00": origin})


def check_cat_oracle() -> Check:
    g = desk_grid()
    d = 4.0
    plus, minus = st.double_slit_lobes(g, d, 1.0)
    W = wg.wigner_from_position(plus + minus)
    Q, P = np.meshgrid(W.q, W.p, indexing="ij")
    err = _sup(W.w, st.analytic_slit_wdf(Q, P, d, 1.0)[3])
    w_int = W.w - wg.wigner_from_position(plus).w - wg.wigner_from_position(minus).w
    row = w_int[g.n // 2]
    sel = np.abs(W.p) < 3.0

    def model(p, amp, period):
        return amp * np.exp(-(p**2)) * np.cos(2 * np.pi * p / period)

    (amp, period), _ = curve_fit(model, W.p[sel], row[sel], p0=(row.max(), 0.8))
    target = math.pi / d
    rel = abs(period - target) / target
    ok = err <= 1e-8 and rel <= 1e-3
    return Check(2, "cat-state oracle", ok, f"sup error {err:.2e} (<= 1e-8), fringe period {period:.6f} vs {target:.6f} (rel {rel:.1e})",
                 {"sup_error": err, "period": float(period)})


def check_marginals() -> Check:
    g = desk_grid()
    worst_q = worst_p = 0.0
    for psi in _test_states(g).values():
        W = wg.wigner_from_position(psi)
        worst_q = max(worst_q, _sup(wg.marginal_q(W), np.abs(psi.amp) ** 2))
        worst_p = max(worst_p, _sup(wg.marginal_p(W), np.abs(wg.momentum_on_wigner_lattice(psi)) ** 2))
    ok = worst_q <= 1e-13 and worst_p <= 1e-8
    return Check(3, "marginal identities", ok, f"position {worst_q:.2e} (<= 1e-13), momentum {worst_p:.2e} (<= 1e-8)",
                 {"marginal_q": worst_q, "marginal_p": worst_p})


def check_dual_path() -> Check:
    g = desk_grid()
    inputs = {"gaussian": st.gaussian_state(g, 0.5, 1.5), "cat": st.double_slit_state(g, 4.0, 1.0)}
    pos_f = optics.detector_transmittance(g, 2.4, 4.0)
    mom_f = wg.fourier_transform(st.gaussian_state(g, 0.0, 1.3))
    gen_f = st.gaussian_state(g, 0.0, 1.0)
    gen_mf = wg.fourier_transform(st.gaussian_state(g, 0.0, 2.0))
    detector = st.gaussian_state(g, 0.0, 1.0)
    errs = {}
    for name, psi in inputs.items():
        W_pos = wg.wigner_from_position(psi)
        phi = wg.fourier_transform(psi)
        W_mom = wg.wigner_from_momentum(phi)
        out = flt.apply_position_filter(psi, pos_f).state_raw
        errs[f"position/{name}"] = _sup(wg.wigner_from_position(out).w,
                                        flt.filter_phase_space_position(W_pos, wg.wigner_from_position(pos_f)).w)
        out = flt.apply_momentum_filter(phi, mom_f).state_raw
        errs[f"momentum/{name}"] = _sup(wg.wigner_from_momentum(out).w,
                                        flt.filter_phase_space_momentum(W_mom, wg.wigner_from_momentum(mom_f)).w)
        out = flt.general_filter_position(psi, gen_f, 0.7).state_raw
        errs[f"general position/{name}"] = _sup(
            wg.wigner_from_position(out).w,
            flt.general_filter_position_phase_space(W_pos, wg.wigner_from_position(gen_f), 0.7).w)
        out = flt.general_filter_momentum(phi, gen_mf, 1.3).state_raw
        errs[f"general momentum/{name}"] = _sup(
            wg.wigner_from_momentum(out).w,
            flt.general_filter_momentum_phase_space(W_mom, wg.wigner_from_momentum(gen_mf), 1.3).w)
        errs[f"detection/{name}"] = _sup(flt.detect(W_pos, wg.wigner_from_position(detector)).w,
                                         flt.detect_wavefunction(psi, detector).w)
    worst = max(errs, key=errs.get)
    ok = all(v <= 1e-7 for v in errs.values())
    return Check(4, "dual-path filtering", ok, f"worst {errs[worst]:.2e} ({worst}) over {len(errs)} cases (<= 1e-7)", errs)


def check_misaligned_filter() -> Check:
    g = desk_grid()
    params = st.SlitParams(d=4.0, q_f=1.0, delta=1.0, q_i=8.0)
    beam = st.gaussian_state(g, params.delta, params.q_i, allow_truncation=True)
    slit = st.double_slit_state(g, params.d, params.q_f)
    W = wg.wigner_from_position(flt.apply_position_filter(beam, slit).state_raw)
    Q, P = np.meshgrid(W.q, W.p, indexing="ij")
    ref = st.analytic_filtered_wdf(Q, P, params)
    num = W.w / wg.total_mass(W)
    ref = ref / (ref.sum() * W.dq * W.dp)
    err = _sup(num, ref)
    return Check(5, "misaligned-beam oracle", err <= 1e-7, f"sup error {err:.2e} after unit-mass scaling (<= 1e-7)", {"sup_error": err})


def check_transition_probability() -> Check:
    g = desk_grid()
    a = wg.wigner_from_position(st.gaussian_state(g, -1.0, 1.0))
    b = wg.wigner_from_position(st.gaussian_state(g, 1.0, 1.0))
    t = wg.overlap(a, b)
    purity = wg.overlap(a, a)
    h0 = wg.wigner_from_position(st.hermite_gauss_state(g, 0))
    h1 = wg.wigner_from_position(st.hermite_gauss_state(g, 1))
    cross = abs(wg.overlap(h0, h1))
    ok = abs(t - math.exp(-2)) <= 1e-6 and abs(purity - 1) <= 1e-8 and cross <= 1e-9
    return Check(6, "transition probability", ok,
                 f"overlap {t:.8f} vs e^-2 (diff {t - math.exp(-2):.1e}), purity - 1 = {purity - 1:.1e}, hermite 0-1 {cross:.1e}",
                 {"overlap": t, "purity": purity, "hermite01": cross})


def check_moyal_gram() -> Check:
    g = make_grid(256, 0.0, 24.0)
    funcs = [st.hermite_gauss_state(g, k) for k in range(5)]
    maps = np.array([[wg.cross_wigner(a, b).w for b in funcs] for a in funcs]).reshape(25, -1)
    gram = g.h * (maps @ maps.conj().T) * g.dq * g.wigner.dp
    err = _sup(gram, np.eye(25))
    return Check(7, "Moyal orthonormality", err <= 1e-5, f"5x5 Gram tensor deviates from identity by {err:.2e} (<= 1e-5)", {"sup_error": err})


def check_detection_positivity() -> Check:
    g = desk_grid()
    W_cat = wg.wigner_from_position(st.double_slit_state(g, 4.0, 1.0))
    mins = {}
    for width in (0.5, 1.0, 2.4, 4.0):
        W_d = wg.wigner_from_position(st.gaussian_state(g, 0.0, width))
        mins[width] = float(flt.detect(W_cat, W_d).w.min())
    worst = min(mins.values())
    return Check(8, "detection positivity", worst >= -1e-10, f"smallest detection value {worst:.2e} (>= -1e-10)",
                 {str(k): v for k, v in mins.items()})


# --- 9-12: benches, propagation, uncertainty ----------------------------------


def check_which_path() -> Check:
    blocked = scn.run_detector_filter(2.4)
    partial = scn.run_detector_filter(4.0)
    ratio = max(pr.interference_energy for pr in blocked.planes)
    v_blocked = float(blocked.plane(5.0).visibility_q)
    v_partial = float(partial.plane(5.0).visibility_q)
    ok = ratio <= 0.02 and v_blocked <= 0.05 and 0.05 < v_partial < 0.999
    return Check(9, "which-path destruction", ok,
                 f"q_d=2.4: energy ratio {ratio:.4f} (<= 0.02), visibility {v_blocked:.4f} (<= 0.05); "
                 f"q_d=4: visibility {v_partial:.4f} (in (0.05, 0.999))",
                 {"energy_ratio": ratio, "visibility_blocked": v_blocked, "visibility_partial": v_partial})


def check_propagation() -> Check:
    g = desk_grid()
    cat = st.double_slit_state(g, 4.0, 1.0)
    moving = st.gaussian_state(g, 1.0, 1.5, p0=0.8)
    phi0 = np.abs(wg.fourier_transform(cat).amp) ** 2
    phi5 = np.abs(wg.fourier_transform(optics.free_propagate(cat, 5.0)).amp) ** 2
    e_phi = _sup(phi0, phi5)
    e_comp = _sup(optics.free_propagate(optics.free_propagate(cat, 2.0), 3.0).amp, optics.free_propagate(cat, 5.0).amp)
    m0 = wg.moments(wg.wigner_from_position(moving))
    m1 = wg.moments(wg.wigner_from_position(optics.free_propagate(moving, 4.0)))
    e_ehr = abs(m1["mean_q"] - (m0["mean_q"] + 4.0 * m0["mean_p"]))
    e_shear = _sup(optics.shear_wigner(wg.wigner_from_position(cat), 5.0).w,
                   wg.wigner_from_position(optics.free_propagate(cat, 5.0)).w)
    ok = e_phi <= 1e-10 and e_comp <= 1e-8 and e_ehr <= 1e-8 and e_shear <= 1e-6
    return Check(10, "propagation", ok,
                 f"|Phi|^2 change {e_phi:.1e}, composition {e_comp:.1e}, first moment {e_ehr:.1e}, map shear {e_shear:.1e}",
                 {"momentum_density": e_phi, "composition": e_comp, "first_moment": e_ehr, "shear": e_shear})


def check_delayed_choice() -> Check:
    res = scn.run_delayed_choice()
    v0 = float(res.plane(0.0).visibility_q)
    v1 = float(res.plane(1.0).visibility_q)
    vp0 = float(res.plane(0.0).visibility_p)
    apart = scn.has_separated_lobes(res.plane(3.0).marginal_q)
    ok = v0 <= 0.05 and v1 >= 0.5 and apart and vp0 <= 0.05
    return Check(11, "delayed choice", ok,
                 f"visibility_q {v0:.3f} at tau=0 (<= 0.05), {v1:.3f} at tau=1 (>= 0.5); "
                 f"separate lobes at tau=3: {apart}; visibility_p {vp0:.3f} at tau=0 (<= 0.05)",
                 {"vq0": v0, "vq1": v1, "vp0": vp0, "separated_tau3": apart})


def check_uncertainty() -> Check:
    g = desk_grid()
    products = {name: wg.uncertainty_product(wg.wigner_from_position(psi)) for name, psi in _test_states(g).items()}
    floor = 0.5 * g.hbar * (1 - 1e-6)
    above = all(v >= floor for v in products.values())
    minimal = [wg.uncertainty_product(wg.wigner_from_position(st.gaussian_state(g, c, w)))
               for c, w in ((0.0, 1.0), (2.0, 0.5), (-1.0, 2.0))]
    eq = max(abs(v - 0.5 * g.hbar) for v in minimal)
    ok = above and eq <= 1e-6
    low = min(products, key=products.get)
    return Check(12, "uncertainty floor", ok,
                 f"smallest product {products[low]:.6f} ({low}); plain Gaussians off hbar/2 by {eq:.1e} (<= 1e-6)",
                 {**products, "gaussian_equality": eq})


CHECKS = (
    check_gaussian_oracle,
    check_cat_oracle,
    check_marginals,
    check_dual_path,
    check_misaligned_filter,
    check_transition_probability,
    check_moyal_gram,
    check_detection_positivity,
    check_which_path,
    check_propagation,
    check_delayed_choice,
    check_uncertainty,
)
# the bench runs are the slow part
QUICK_SKIP = {9, 11}


def run_checks(quick: bool = False, callback=None) -> list:
    """Run all checks (``quick`` skips the full bench runs); ``callback`` sees each result."""
    results = []
    for number, fn in enumerate(CHECKS, start=1):
        if quick and number in QUICK_SKIP:
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            try:
                res = fn()
            except Exception as exc:  # a crash is a failed check, not a crashed suite
                res = Check(number, fn.__name__.removeprefix("check_").replace("_", " "), False, f"raised {type(exc).__name__}: {exc}")
        results.append(res)
        if callback is not None:
            callback(res)
    return results
