"""Survey report: delimited tables plus rendered figures.

Each section writes one CSV and one PNG into the output directory:

    ziegler      follower-load abscissa curves and the damped/undamped
                 threshold gap
    maclaurin    growth rates across the eccentricity range, inviscid
                 against weakly viscous
    sobolev      real eigenvalue branches with signature coloring and the
                 collision at the band edge
    surface      the ruled neutral surface with the tangent cone, the
                 exceptional-point curve, and the heavy-damping vertex
    combres      measured parametric-resonance tongue against the
                 closed-form half-widths
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from . import models
from .hurwitz import surface_V_sample
from .krein import collision_scan
from .msystem import system_abscissa
from .umbrella import ep_set_point


def _write_csv(path: Path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [format(v, ".17g") if isinstance(v, float) else v for v in row]
            )


def _ziegler_section(out: Path, quick: bool):
    loads = np.linspace(0.5, 2.6, 60 if quick else 211)
    dampings = (0.0, 0.05, 0.2)
    rows = []
    curves = {}
    for b in dampings:
        absc = [
            system_abscissa(models.build_ziegler(models.ZieglerParams(P=float(P), b=b)))
            for P in loads
        ]
        curves[b] = absc
    for i, P in enumerate(loads):
        rows.append((float(P),) + tuple(curves[b][i] for b in dampings))
    _write_csv(out / "ziegler.csv", ("P",) + tuple(f"abscissa_b{b:g}" for b in dampings), rows)

    pk, _, pk_limit = models.ziegler_criticals(models.ZieglerParams())
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for b in dampings:
        ax.plot(loads, curves[b], label=f"b = {b:g}")
    ax.axvline(pk, color="k", ls="--", lw=0.8, label="undamped threshold")
    ax.axvline(pk_limit, color="r", ls=":", lw=0.8, label="vanishing-damping limit")
    ax.axhline(0.0, color="0.6", lw=0.5)
    ax.set_xlabel("follower load P")
    ax.set_ylabel("spectral abscissa")
    ax.set_title("Follower-load pendulum: damped thresholds sit below the undamped one")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out / "ziegler.png", dpi=150)
    plt.close(fig)


def _maclaurin_section(out: Path, quick: bool):
    eccs = np.linspace(0.5, 0.995, 80 if quick else 240)
    rows = []
    inviscid, viscous = [], []
    for e in eccs:
        sys_i = models.build_maclaurin(models.MaclaurinParams(e=float(e)), "inviscid")
        sys_v = models.build_maclaurin(models.MaclaurinParams(e=float(e), mu=0.01), "viscous")
        gi = system_abscissa(sys_i)
        gv = system_abscissa(sys_v)
        inviscid.append(gi)
        viscous.append(gv)
        rows.append((float(e), gi, gv))
    _write_csv(out / "maclaurin.csv", ("e", "growth_inviscid", "growth_viscous_mu0.01"), rows)

    e_secular, e_dynamical = models.maclaurin_criticals()
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(eccs, inviscid, "k-", label="inviscid")
    ax.plot(eccs, viscous, "r-", label="viscous, mu = 0.01")
    ax.axvline(e_secular, color="g", ls=":", lw=0.8, label="secular point")
    ax.axvline(e_dynamical, color="b", ls="--", lw=0.8, label="dynamical point")
    ax.set_xlabel("eccentricity e")
    ax.set_ylabel("max growth rate")
    ax.set_title("Viscosity removes the gyroscopic stabilization window")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out / "maclaurin.png", dpi=150)
    plt.close(fig)


def _sobolev_section(out: Path, quick: bool):
    grid = np.linspace(1.5, 4.0, 40 if quick else 101)
    family = models.sobolev_family(models.SobolevParams(a=1.0))
    path, events = collision_scan(family, grid, "c")
    rows = []
    for pt in path.points:
        for entry in pt.entries:
            rows.append(
                (
                    pt.parameter,
                    entry.value.real,
                    entry.value.imag,
                    entry.krein_sign,
                    entry.algebraic_multiplicity,
                )
            )
    _write_csv(out / "sobolev.csv", ("c", "lam_re", "lam_im", "krein_sign", "multiplicity"), rows)

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    colors = {1: "tab:red", -1: "tab:green", 0: "k", None: "0.5"}
    for pt in path.points:
        for entry in pt.entries:
            ax.plot(
                pt.parameter,
                entry.value.real,
                ".",
                ms=3,
                color=colors.get(entry.krein_sign, "0.5"),
            )
    for ev in events:
        ax.plot(0.5 * sum(ev.bracket), ev.value.real, "b*", ms=12)
    ax.set_xlabel("polar semiaxis c (a = 1)")
    ax.set_ylabel("Re lambda")
    ax.set_title("Cavity top: signed branches merge at the band edge c = 3a")
    fig.tight_layout()
    fig.savefig(out / "sobolev.png", dpi=150)
    plt.close(fig)


def _surface_section(out: Path, quick: bool):
    points = surface_V_sample((0.25, 4.0), (0.0, 4.0), (17, 13) if quick else (33, 25))
    rows = [(p.a1, p.a3, p.a2, int(p.on_double_line)) for p in points]
    _write_csv(out / "surface.csv", ("a1", "a3", "a2", "double_line"), rows)

    fig = plt.figure(figsize=(6.8, 5.2))
    ax = fig.add_subplot(projection="3d")
    ms = sorted({p.a2 for p in points if not p.on_double_line})
    for a2 in ms:
        line = [(p.a1, p.a3) for p in points if not p.on_double_line and p.a2 == a2]
        xs = [q[0] for q in line]
        ys = [q[1] for q in line]
        ax.plot(xs, ys, a2, "b-", lw=0.4, alpha=0.6)
    # tangent cone a1 = a3 > 0, a2 > 2
    t = np.linspace(0.0, 4.0, 10)
    a2v = np.linspace(2.0, 8.0, 10)
    T, A2 = np.meshgrid(t, a2v)
    ax.plot_surface(T, T, A2, alpha=0.25, color="green")
    # exceptional-point curve and the heavy-damping vertex
    a1s = np.linspace(0.0, 5.0, 60)
    eps = [ep_set_point(float(a1))[0] for a1 in a1s]
    ax.plot([q.a1 for q in eps], [q.a3 for q in eps], [q.a2 for q in eps], "r-", lw=1.5)
    ax.scatter([0.0], [0.0], [2.0], marker="D", color="k", s=30)
    ax.scatter([4.0], [4.0], [6.0], marker="*", color="m", s=80)
    ax.set_xlabel("a1")
    ax.set_ylabel("a3")
    ax.set_zlabel("a2")
    ax.set_title("Neutral surface, tangent cone, and the exceptional-point curve")
    fig.tight_layout()
    fig.savefig(out / "surface.png", dpi=150)
    plt.close(fig)


def _combres_section(out: Path, quick: bool):
    Omega, eps = 0.5, 0.05
    steps = 1200 if quick else 2000
    deltas = np.linspace(-2.0, 2.0, 41 if quick else 81)
    rows = []
    curves = {}
    for mu in (0.0, 0.05):
        radii = []
        for d in deltas:
            p = models.CombResParams(Omega=Omega, eps=eps, mu=mu, delta_plus=float(d))
            _, mult = models.monodromy(models.build_combres(p), steps)
            radii.append(max(abs(m) for m in mult))
        curves[mu] = radii
    for i, d in enumerate(deltas):
        rows.append((float(d), curves[0.0][i], curves[0.05][i]))
    _write_csv(out / "combres.csv", ("delta_plus", "max_multiplier_mu0", "max_multiplier_mu0.05"), rows)

    p0 = models.CombResParams(Omega=Omega)
    iv = models.combres_interval(0.05, p0.omega_sum)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(deltas, curves[0.0], "k-", label="mu = 0")
    ax.plot(deltas, curves[0.05], "r-", label="mu = 0.05")
    ax.axhline(1.0, color="0.6", lw=0.5)
    for w in (-1.0, 1.0):
        ax.axvline(w, color="k", ls=":", lw=0.8)
    for w in (-iv.damped_half_width, iv.damped_half_width):
        ax.axvline(w, color="r", ls=":", lw=0.8)
    ax.set_xlabel("sum detuning delta_plus")
    ax.set_ylabel("max |Floquet multiplier|")
    ax.set_title("Sum-resonance tongue against the closed-form half-widths")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out / "combres.png", dpi=150)
    plt.close(fig)


_SECTIONS = (
    ("ziegler", _ziegler_section),
    ("maclaurin", _maclaurin_section),
    ("sobolev", _sobolev_section),
    ("surface", _surface_section),
    ("combres", _combres_section),
)


def render_report(out_dir, quick: bool = False):
    """Render every section; returns the list of files written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, section in _SECTIONS:
        section(out, quick)
        written.extend([out / f"{name}.csv", out / f"{name}.png"])
    return written
