"""Figure rendering for CLI reports. All figures are written as SVG files.

matplotlib is imported lazily so library users who never plot do not pay for
it; the CLI only calls in here when --svg is given.
"""

from __future__ import annotations

import math

import numpy as np


def _mpl():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def plot_trajectories(trajectories, spec, path, title="principal curvature lines"):
    plt = _mpl()
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    u_lo, u_hi = np.inf, -np.inf
    for traj in trajectories:
        pts = traj.points
        color = "tab:blue" if traj.foliation == 1 else "tab:red"
        ax.plot(pts[:, 0], pts[:, 1], color=color, lw=0.9,
                label=f"foliation {traj.foliation}")
        u_lo = min(u_lo, pts[:, 0].min())
        u_hi = max(u_hi, pts[:, 0].max())
    if not np.isfinite(u_lo):
        u_lo, u_hi = 0.0, spec.l
    pad = 0.05 * (u_hi - u_lo + 1e-9)
    ax.axhline(0.0, color="k", ls="--", lw=1.0, label="umbilic curve")
    ax.set_xlim(u_lo - pad, u_hi + pad)
    ax.set_xlabel("u (arclength)")
    ax.set_ylabel("v (transverse offset)")
    ax.set_title(title)
    handles, labels = ax.get_legend_handles_labels()
    seen = dict(zip(labels, handles))
    ax.legend(seen.values(), seen.keys(), loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _jet_fan_trajectories(jet, n_fan=28, t_max=14.0, dt=0.02):
    """Short trajectories of the homogeneous jet field for display."""
    from .blowup import _branch_angles, _angdist_mod_pi
    out = []
    for i in range(n_fan):
        theta0 = 2.0 * math.pi * i / n_fan
        b = _branch_angles(jet, theta0)
        for fol in (0, 1):
            for sgn in (1.0, -1.0):
                theta, rho = theta0, 0.0
                chi = b[fol] if sgn > 0 else b[fol] + math.pi
                pts = [(rho, theta)]
                t = 0.0
                while t < t_max:
                    bb = _branch_angles(jet, theta)
                    psi = bb[0] if _angdist_mod_pi(bb[0], chi) <= _angdist_mod_pi(bb[1], chi) else bb[1]
                    chi = psi if math.cos(psi - chi) >= 0.0 else psi + math.pi
                    theta += dt * math.sin(chi - theta)
                    rho += dt * math.cos(chi - theta)
                    t += dt
                    pts.append((rho, theta))
                    if abs(rho) > 5.0:
                        break
                out.append((fol, np.array(pts)))
    return out


def plot_portrait(census, jet, path):
    """Blown-up (angle/log-radius) and blown-down views of the jet portrait."""
    plt = _mpl()
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10.0, 4.6))
    fans = _jet_fan_trajectories(jet)
    for fol, pts in fans:
        color = "tab:blue" if fol == 0 else "tab:red"
        ax1.plot(pts[:, 1], pts[:, 0], color=color, lw=0.5, alpha=0.7)
        r = np.exp(pts[:, 0])
        ax2.plot(r * np.cos(pts[:, 1]), r * np.sin(pts[:, 1]), color=color, lw=0.5, alpha=0.7)
    for fol in (0, 1):
        for th in census.rays[fol]:
            ax1.axvline(th, color="k", lw=0.8, ls=":")
            ax2.plot([0, 2.5 * math.cos(th)], [0, 2.5 * math.sin(th)], "k:", lw=0.8)
    ax1.set_xlabel("direction angle")
    ax1.set_ylabel("log radius")
    ax1.set_title("blow-up of the direction field")
    ax2.set_xlim(-2.5, 2.5)
    ax2.set_ylim(-2.5, 2.5)
    ax2.set_aspect("equal")
    ax2.set_title(f"blown-down portrait ({census.verdict})")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_return_map(report, path):
    plt = _mpl()
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    v0 = np.array(report.v0_grid)
    pi = np.array(report.pi_values)
    ax.plot(v0, pi - v0, "o", color="tab:blue", label="measured return offset")
    xs = np.linspace(0.0, v0.max() * 1.05, 200)
    s, C = report.pi_prime_numeric, report.pi_second_numeric
    ax.plot(xs, (s - 1.0) * xs + 0.5 * C * xs**2, "-", color="tab:orange",
            label="quadratic fit")
    ax.axhline(0.0, color="k", lw=0.7)
    ax.set_xlabel("start offset v0")
    ax.set_ylabel("pi(v0) - v0")
    ax.set_title("first-return map near the umbilic curve")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_order_law(rows, slopes, path):
    """Log-log deviation curves per coefficient with measured slopes."""
    plt = _mpl()
    names = list(slopes.keys())
    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    vs = [r[0] for r in rows]
    for name in names:
        diffs = [abs(r[1][name][0] - r[1][name][1]) + 1e-300 for r in rows]
        s = slopes[name].slope
        label = f"{name} (slope {'inf' if math.isinf(s) else format(s, '.2f')})"
        ax.loglog(vs, diffs, marker=".", lw=0.8, label=label)
    ax.set_xlabel("offset v")
    ax.set_ylabel("|series - numeric|")
    ax.set_title("truncation order of the coefficient series")
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
