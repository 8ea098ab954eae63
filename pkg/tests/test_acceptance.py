"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest -s tests/test_acceptance.py`` to see the per-criterion
report.  Tolerances are fixed here; relative comparisons use an absolute
floor of 1 (``|a - b| <= tol * max(1, |a|, |b|)``) so near-zero values
are compared absolutely.
"""

import math

import numpy as np

from unital_otto import (
    ControlSpec,
    CycleParams,
    LZParams,
    Regime,
    cf_unital,
    classify_regime,
    classify_regime_means,
    closed_form_first_second,
    cs_distribution,
    cs_first_cumulants,
    cumulant_ratio_scan,
    cumulants_from_distribution,
    cf_derivative_check,
    enumerate_paths,
    monitored_vs_unmonitored,
    qm_unmonitored_closed_form,
    sample,
    unmonitored_cycle,
)


def report(num, ok, detail):
    print(f"[acceptance] criterion {num}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {num} failed: {detail}"


def bisect(f, lo, hi, iters=80):
    f_lo = f(lo)
    assert f_lo * f(hi) < 0.0, "bisection bracket does not straddle a root"
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if f_lo * f(mid) <= 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def test_criterion_1_quoted_work_and_relative_fluctuations():
    params = CycleParams(0.7, 1.0, 2.0, 0.0, 0.0)
    checks = []
    for theta, mean_ref, rf_ref in ((0.2, 0.241747, 12.6889), (0.7, 0.846115, 2.9111)):
        cums = cumulants_from_distribution(enumerate_paths(params, theta))
        rf = cums.w[1] / cums.w[0] ** 2
        checks.append(abs(cums.w[0] - mean_ref) < 1e-5)
        checks.append(abs(rf - rf_ref) / rf_ref < 1e-3)
    report(1, all(checks), "work means 0.241747/0.846115, RFs 12.6889/2.9111")


def test_criterion_2_zero_work_thresholds():
    beta, nu1, nu2 = 0.7, 1.0, 2.0

    def plain_work(theta):
        return lambda d: cumulants_from_distribution(
            enumerate_paths(CycleParams(beta, nu1, nu2, d, d), theta)
        ).w[0]

    def cs_work(theta, branch):
        ctrl = ControlSpec(0.5, branch)
        return lambda d: cumulants_from_distribution(
            cs_distribution(CycleParams(beta, nu1, nu2, d, d), theta, ctrl)
        ).w[0]

    targets = [
        (plain_work(0.2), 0.10685),
        (plain_work(0.7), 0.31125),
        (cs_work(0.2, "plus"), 0.070290),
        (cs_work(0.2, "minus"), 0.20871),
        (cs_work(0.5, "plus"), 0.17712),
        (cs_work(0.5, "minus"), 0.36603),
    ]
    deviations = []
    for work, expected in targets:
        root = bisect(work, 1e-6, 0.499)
        deviations.append(abs(root - expected))
    ok = all(dev < 1e-4 for dev in deviations)
    report(2, ok, f"six bisection roots, max deviation {max(deviations):.2e}")


def test_criterion_3_regime_flip_at_exact_rational_root():
    params = CycleParams(0.5, 1.0, 2.0, 0.1, 0.1)

    def work(theta):
        return cumulants_from_distribution(enumerate_paths(params, theta)).w[0]

    root = bisect(work, 0.05, 0.9)
    below = classify_regime(closed_form_first_second(params, root - 1e-4), 0.5)
    above = classify_regime(closed_form_first_second(params, root + 1e-4), 0.5)
    ok = (
        abs(root - 0.1875) < 1e-6
        and below is Regime.ACCELERATOR
        and above is Regime.ENGINE
    )
    report(3, ok, f"accelerator -> engine at theta = {root:.9f}")


def _random_cycle(gen, symmetric=False):
    beta = 0.0
    while beta == 0.0:
        beta = gen.uniform(-2.0, 2.0)
    delta = gen.random()
    zeta = delta if symmetric else gen.random()
    return CycleParams(beta, gen.uniform(1e-3, 3.0), gen.uniform(1e-3, 3.0), delta, zeta)


def test_criterion_4_route_agreement():
    gen = np.random.default_rng(2024)
    worst_closed = worst_fd = 0.0
    for _ in range(10_000):
        params = _random_cycle(gen)
        theta = gen.random()
        cums = cumulants_from_distribution(enumerate_paths(params, theta))
        first = closed_form_first_second(params, theta)
        for a, b in (
            (cums.w[0], first.w_mean),
            (cums.w[1], first.w_var),
            (cums.q_m[0], first.qm_mean),
            (cums.q_m[1], first.qm_var),
            (cums.qt_mean, first.qt_mean),
        ):
            worst_closed = max(worst_closed, abs(a - b) / max(1.0, abs(a), abs(b)))
        fd = cf_derivative_check(params, theta, orders=(1, 2))
        for a, b in (
            (fd.w[0], cums.w[0]),
            (fd.w[1], cums.w[1]),
            (fd.q_m[0], cums.q_m[0]),
            (fd.q_m[1], cums.q_m[1]),
        ):
            worst_fd = max(worst_fd, abs(a - b) / max(1.0, abs(a), abs(b)))
    worst_cf = 0.0
    for _ in range(100):
        params = _random_cycle(gen)
        theta = gen.random()
        dist = enumerate_paths(params, theta)
        gw, gm = gen.uniform(-4.0, 4.0, size=2)
        brute = complex(np.sum(dist.prob * np.exp(1j * (gw * dist.w + gm * dist.q_m))))
        worst_cf = max(worst_cf, abs(cf_unital(params, theta, gw, gm) - brute))
    ok = worst_closed <= 1e-12 and worst_fd <= 1e-6 and worst_cf <= 1e-12
    report(
        4,
        ok,
        f"closed-form {worst_closed:.2e} <= 1e-12, derivative {worst_fd:.2e} <= 1e-6, "
        f"CF points {worst_cf:.2e} <= 1e-12",
    )


def test_criterion_5_proved_inequality_suite():
    gen = np.random.default_rng(551)
    margin = 1e-10
    violations = []

    # bath heat never positive at positive temperature
    for _ in range(10_000):
        params = _random_cycle(gen)
        if params.beta < 0:
            params = CycleParams(-params.beta, params.nu1, params.nu2, params.delta, params.zeta)
        if closed_form_first_second(params, gen.random()).qt_mean > margin:
            violations.append("qt_nonpositive")

    # no work from an unchanged gap, forward + backward
    for _ in range(10_000):
        base = _random_cycle(gen)
        params = CycleParams(abs(base.beta), base.nu1, base.nu1, base.delta, base.zeta)
        theta = gen.random()
        total = (
            closed_form_first_second(params, theta).w_mean
            + closed_form_first_second(params, theta, "backward").w_mean
        )
        if total > margin:
            violations.append("equal_gap_work")

    # engine efficiency capped by Otto: the machine is the forward and
    # backward cycle on equal footing, so classify the summed flows
    engines = 0
    for _ in range(10_000):
        symmetric = gen.random() < 0.5
        params = _random_cycle(gen, symmetric=symmetric)
        theta = gen.random()
        fwd = closed_form_first_second(params, theta)
        bwd = closed_form_first_second(params, theta, "backward")
        work, heat = fwd.w_mean + bwd.w_mean, fwd.qm_mean + bwd.qm_mean
        regime = classify_regime_means(work, heat, fwd.qt_mean, params.beta)
        if regime is not Regime.ENGINE:
            continue
        engines += 1
        if work / heat > 1.0 - params.nu1 / params.nu2 + margin:
            violations.append("eta_le_otto")

    # symmetric cycle: eta^2 <= ratio <= 1 under its precondition, and
    # the Otto-squared lower bound under its own
    cond_hits = hopm_hits = 0
    for _ in range(10_000):
        params = _random_cycle(gen, symmetric=True)
        theta = gen.random()
        d, nu1, nu2 = params.delta, params.nu1, params.nu2
        fwd = closed_form_first_second(params, theta)
        if fwd.qm_var <= 0 or abs(fwd.qm_mean) < 1e-12:
            continue
        ratio = fwd.w_var / fwd.qm_var
        eta = fwd.w_mean / fwd.qm_mean
        condnu = 2 * (1 - 2 * d) * theta * nu2 >= (theta + 2 * d * (1 - d) * (1 - 2 * theta)) * nu1
        hopm = (1 - 2 * d) * theta * nu2 >= (1 - d) * (d + theta - 2 * d * theta) * nu1
        if condnu:
            cond_hits += 1
            if eta * eta > ratio + margin or ratio > 1.0 + margin:
                violations.append("symmetric_chain")
        if hopm:
            hopm_hits += 1
            if (1 - nu1 / nu2) ** 2 > ratio + margin:
                violations.append("otto_sq_lower")

    # asymmetric symmetrised chain under its precondition
    connu2_hits = 0
    for _ in range(10_000):
        params = _random_cycle(gen)
        theta = gen.random()
        d, z, nu1, nu2 = params.delta, params.zeta, params.nu1, params.nu2
        s = d + z - 2 * d * z
        if 2 * theta * (1 - d - z) * nu2 < (theta + (1 - 2 * theta) * s) * nu1:
            continue
        fwd = closed_form_first_second(params, theta)
        bwd = closed_form_first_second(params, theta, "backward")
        heat = fwd.qm_mean + bwd.qm_mean
        spread = fwd.qm_var + bwd.qm_var
        if spread <= 0 or abs(heat) < 1e-12:
            continue
        connu2_hits += 1
        ratio = (fwd.w_var + bwd.w_var) / spread
        eta = (fwd.w_mean + bwd.w_mean) / heat
        if eta * eta > ratio + margin or ratio > 1.0 + margin:
            violations.append("asymmetric_chain")

    # coherently controlled bath heat for theta <= 1/2, beta > 0
    for _ in range(10_000):
        params = _random_cycle(gen)
        if params.beta < 0:
            params = CycleParams(-params.beta, params.nu1, params.nu2, params.delta, params.zeta)
        ctrl = ControlSpec(gen.random(), "plus" if gen.random() < 0.5 else "minus")
        if cs_first_cumulants(params, 0.5 * gen.random(), ctrl).qt_mean > margin:
            violations.append("cs_qt_nonpositive")

    ok = not violations and engines > 100 and cond_hits > 100 and connu2_hits > 100
    report(
        5,
        ok,
        f"no violations in 6x10^4 tuples "
        f"(engine {engines}, condnu {cond_hits}, hopm {hopm_hits}, connu2 {connu2_hits}); "
        f"violated: {sorted(set(violations))}",
    )


def test_criterion_6_adiabatic_cumulant_identities():
    gen = np.random.default_rng(66)
    worst = 0.0
    for _ in range(300):
        beta = gen.uniform(-2.0, 2.0) or 0.5
        nu1 = gen.uniform(0.1, 3.0)
        nu2 = gen.uniform(0.1, 3.0)
        theta = gen.uniform(0.01, 1.0)
        params = CycleParams(beta, nu1, nu2, 0.0, 0.0)
        cums = cumulants_from_distribution(enumerate_paths(params, theta))
        otto = 1.0 - nu1 / nu2
        for n in range(4):
            # cross-multiplied form keeps the identity well conditioned
            # when kappa_n(Q_M) nearly cancels internally
            lhs, rhs = cums.w[n], otto ** (n + 1) * cums.q_m[n]
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs)))
    ok = worst <= 1e-12
    report(6, ok, f"kappa_n(W) = (1 - nu1/nu2)^n kappa_n(Q_M), worst {worst:.2e}")


def test_criterion_7_higher_cumulant_corridor_escapes():
    params = CycleParams(0.5, 1.0, 2.0, 0.1, 0.1)
    out3 = out4 = neg3 = neg4 = False
    for theta in np.linspace(0.01, 1.0, 500):
        r3 = cumulant_ratio_scan(params, float(theta), 3)
        r4 = cumulant_ratio_scan(params, float(theta), 4)
        if not r3.undefined:
            out3 = out3 or r3.below_eta_power or r3.above_one
            neg3 = neg3 or r3.ratio < 0.0
        if not r4.undefined:
            out4 = out4 or r4.below_eta_power or r4.above_one
            neg4 = neg4 or r4.ratio < 0.0
    ok = out3 and out4 and neg3 and neg4
    report(7, ok, "third/fourth ratios escape [eta^n, 1], negative cases included")


def test_criterion_8_landau_zener():
    worst = 0.0
    for delta in np.linspace(0.0, 1.0, 6):
        for alpha_m in np.linspace(0.05, math.pi - 0.05, 5):
            for phi in np.linspace(0.0, 2 * math.pi, 4):
                for chi in np.linspace(0.0, 2 * math.pi, 4):
                    p = LZParams.build(0.5, 0.7, 1.3, float(delta), float(phi),
                                       float(alpha_m), float(chi))
                    worst = max(
                        worst, abs(unmonitored_cycle(p).q_m - qm_unmonitored_closed_form(p))
                    )
    formula_ok = worst <= 1e-12

    grid = np.linspace(0.0, 1.0, 101)
    equal_gap = LZParams.build(0.5, 0.4, 0.4, 0.0, 0.0, math.pi / 4, 0.0)
    rows_a = monitored_vs_unmonitored(equal_gap, grid)
    fig6a_ok = max(r.w_mon for r in rows_a) <= 1e-12 and any(r.w_um > 1e-9 for r in rows_a)

    otto_ok = True
    exceeds = False
    for spec in (
        LZParams.build(0.5, 0.4, 0.4, 0.0, 0.0, math.pi / 4, 0.0),
        LZParams.build(0.5, 0.4, 0.9, 0.0, 0.1, math.pi / 3, 0.1),
    ):
        otto = 1.0 - spec.cycle.nu1 / spec.cycle.nu2
        rows = monitored_vs_unmonitored(spec, np.linspace(0.001, 0.999, 199))
        for r in rows:
            if r.regime_mon is Regime.ENGINE and r.eta_mon > otto + 1e-12:
                otto_ok = False
            if r.regime_um is Regime.ENGINE and r.eta_um > otto + 1e-9:
                exceeds = True
    ok = formula_ok and fig6a_ok and otto_ok and exceeds
    report(
        8,
        ok,
        f"matrix-vs-formula {worst:.2e} <= 1e-12; equal gaps: only unmonitored works; "
        "monitored efficiency Otto-capped, unmonitored exceeds it",
    )


def test_criterion_9_monte_carlo_oracle():
    gen = np.random.default_rng(909)
    ok = True
    for trial in range(20):
        params = _random_cycle(gen)
        theta = gen.random()
        dist = enumerate_paths(params, theta)
        exact = cumulants_from_distribution(dist)
        stats = sample(dist, 10**6, seed=7000 + trial)
        for summary, kappa in ((stats.w, exact.w), (stats.q_m, exact.q_m)):
            if summary.mean_stderr > 0:
                ok = ok and abs(summary.mean - kappa[0]) < 5 * summary.mean_stderr
            else:
                ok = ok and summary.mean == kappa[0]
            if summary.variance_stderr > 0:
                ok = ok and abs(summary.variance - kappa[1]) < 5 * summary.variance_stderr
    repro = sample(enumerate_paths(CycleParams(0.7, 1.0, 2.0, 0.1, 0.1), 0.2), 10**5, seed=1)
    again = sample(enumerate_paths(CycleParams(0.7, 1.0, 2.0, 0.1, 0.1), 0.2), 10**5, seed=1)
    ok = ok and repro == again
    report(9, ok, "20 tuples within 5 standard errors; fixed seed bit-identical")
