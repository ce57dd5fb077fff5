"""Smoke test for the otfs_sense extension module.

Build and install with `pip install --no-build-isolation .` from the repository root,
then run `python python/smoke_test.py`.
"""

import numpy as np

import otfs_sense as ots


def as_array(frame):
    return np.array(frame, dtype=complex)


def main():
    cfg = ots.FrameConfig(64, 16, b=4)
    window = ots.SceneWindow(cfg, 20e3, 39e3, 15e3, 16e3)
    x = ots.random_qam_frame(cfg, 1)
    xa = as_array(x)
    assert xa.shape == (16, 64)
    assert np.allclose(np.abs(xa), 1.0)

    back = as_array(ots.sfft(ots.isfft(x, cfg), cfg))
    assert np.max(np.abs(back - xa)) < 1e-10

    d, v = 37.0 * cfg.delay_bin_m, 9.3 * cfg.doppler_bin_mps
    ideal = as_array(ots.model_echo(x, cfg, window, d, v, "ideal_phi"))
    exact = as_array(ots.model_echo(x, cfg, window, d, v, "rect_psi"))
    assert abs(np.linalg.norm(ideal) ** 2 / xa.size - 1.0) < 0.2
    assert np.linalg.norm(exact - ideal) > 0.0

    amp = 0.7 - 0.4j
    y = ots.oracle_echo(x, cfg, window, [(d, v, amp)])
    est = ots.Estimator(x, cfg, window, kind="rect_approx").estimate(y, 1e-12)
    # The oracle integrates the continuous echo and the estimator fits the approximate
    # rectangular-filter model, so the fit is checked to within a bin.
    assert abs(est.d_hat - d) <= cfg.delay_bin_m, est
    assert abs(est.v_hat - v) <= cfg.doppler_bin_mps, est

    clean = ots.model_echo(x, cfg, window, d, v, "ideal_phi")
    scaled = [[amp * z for z in row] for row in clean]
    est = ots.Estimator(x, cfg, window).estimate(scaled, 1e-12)
    assert abs(est.d_hat - d) < 1e-6 and abs(est.v_hat - v) < 1e-6, est
    assert abs(est.alpha_hat - amp) < 1e-9, est

    noise_var = ots.snr_to_noise_var(30.0, cfg)
    noisy = ots.add_noise(scaled, noise_var, 3)
    est = ots.Estimator(x, cfg, window).estimate(noisy, noise_var)
    assert abs(est.d_hat - d) <= cfg.delay_bin_m, est

    csv = ots.run_bench(
        "m_subcarriers = 32\nn_symbols = 8\nb_order = 2\ntrials = 2\n"
        "sweep = b\nsweep_values = 1, 2\nfine_steps_per_bin = 2\n"
    )
    lines = csv.strip().splitlines()
    assert lines[0].startswith("sweep,target_id"), lines[0]
    assert len(lines) == 3, csv

    print("smoke test passed")


if __name__ == "__main__":
    main()
