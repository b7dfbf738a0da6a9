import numpy as np

from umbilic_lines.lineode import integrate_principal_line


def fit_tangential_contact(spec, u0, beta_hint, window=0.15):
    """Fit the quadratic-contact coefficient of the tangent-family leaf.

    Starts on the approximate contact parabola at the left window edge,
    integrates across the tangential point, and fits v(u) with a cubic
    basis; returns the quadratic coefficient. The foliation label of the
    tangent family depends on the sign of a*v, so both labels are tried and
    the run that traverses the window with parabola-scale offsets wins.
    """
    v_start = beta_hint * window * window
    v_cap = max(4.0 * abs(v_start), 0.02)
    for foliation in (1, 2):
        for orientation in (1.0, -1.0):
            traj = integrate_principal_line(
                spec, (u0 - window, v_start), foliation, max_steps=6000,
                orientation=orientation, max_arclength=4.0 * window)
            pts = traj.points
            if pts[-1, 0] < u0 + 0.8 * window:
                continue
            x = pts[:, 0] - u0
            keep = np.abs(x) <= window
            min_pts = max(10, int(1.2 * window / 0.01))
            if keep.sum() < min_pts or np.max(np.abs(pts[keep, 1])) > v_cap:
                continue
            # quartic basis absorbs the leading even correction to the parabola
            coeffs = np.polynomial.polynomial.polyfit(x[keep], pts[keep, 1], 4)
            return float(coeffs[2])
    raise AssertionError("no tangent-family trajectory traversed the window")
