"""Geometry and seeded Rician channel generation for all link families.

Every link uses a Rician model: one deterministic direct path whose angles
come from the actual node positions, plus ``nlos_path_count`` scattered paths
with CN(0,1) gains and angles perturbed uniformly around the direct-path
angles. The scattered sum is scaled by 1/sqrt(L) so the direct path carries
the fraction kappa/(kappa+1) of the expected power.

Generation is pure given an explicit numpy Generator; each link family draws
from its own child stream, so e.g. the direct-link draws do not depend on
the reflecting-surface size.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .config import ArrayGeometry, Position3D, RicianLinkParams, ScenarioConfig
from .errors import GeometryError

__all__ = [
    "SteeringSpec",
    "ChannelSet",
    "los_angles",
    "upa_steering",
    "path_loss_linear",
    "gen_rician_matrix",
    "gen_channel_set",
]


@dataclass(frozen=True)
class SteeringSpec:
    """Array geometry plus direct-path angles, for redrawing scattered-path steering."""

    geom: ArrayGeometry
    azimuth: float
    elevation: float


@dataclass(frozen=True)
class ChannelSet:
    """One realization of every link in the two-cell system.

    G1 : (M, N1) BS1 -> RIS
    G2 : (M, N2) BS2 -> RIS
    h_r1 : (K1, M) RIS -> cell-1 users, one channel vector per row
    h_r2 : (K2, M) RIS -> cell-2 users
    h_d2 : (K2, N2) BS2 -> cell-2 users direct
    theta : constant phase offset the surface applies in cell 2's band
    """

    G1: np.ndarray
    G2: np.ndarray
    h_r1: np.ndarray
    h_r2: np.ndarray
    h_d2: np.ndarray
    noise_var_1: float
    noise_var_2: float
    theta: float


def los_angles(src: Position3D, dst: Position3D) -> tuple[float, float]:
    """Azimuth and elevation of the straight path from src to dst, radians.

    azimuth = atan2(dy, dx); elevation = atan2(dz, horizontal distance).
    A purely vertical path has azimuth 0 by convention.
    """
    dx, dy, dz = dst.x - src.x, dst.y - src.y, dst.z - src.z
    if dx == 0.0 and dy == 0.0 and dz == 0.0:
        raise GeometryError("coincident points have no direction")
    az = float(np.arctan2(dy, dx))
    el = float(np.arctan2(dz, np.hypot(dx, dy)))
    return az, el


def upa_steering(az: float, el: float, geom: ArrayGeometry) -> np.ndarray:
    """Planar-array response, row-major over (vertical p, horizontal q).

    entry(p, q) = exp(j 2 pi spacing (p sin(el) + q cos(el) sin(az)))
    """
    p = np.arange(geom.vertical_count)[:, None]
    q = np.arange(geom.horizontal_count)[None, :]
    phase = 2.0 * np.pi * geom.element_spacing * (
        p * np.sin(el) + q * np.cos(el) * np.sin(az)
    )
    return np.exp(1j * phase).ravel()


def path_loss_linear(
    distance_m: float, exponent: float, c0_db: float = -30.0, d0_m: float = 1.0
) -> float:
    """Linear power gain 10^(c0/10) * (d/d0)^(-exponent).

    Distances below the reference d0 are clamped to d0 with a RuntimeWarning.
    """
    if d0_m <= 0:
        raise ValueError("reference distance must be positive")
    if distance_m < d0_m:
        warnings.warn(
            f"distance {distance_m:.3g} m below reference {d0_m:.3g} m; clamping",
            RuntimeWarning,
            stacklevel=2,
        )
        distance_m = d0_m
    return 10.0 ** (c0_db / 10.0) * (distance_m / d0_m) ** (-exponent)


def gen_rician_matrix(
    rows: int,
    cols: int,
    tx_steering: np.ndarray,
    rx_steering: np.ndarray,
    params: RicianLinkParams,
    pl_gain: float,
    rng: np.random.Generator,
    tx_spec: SteeringSpec | None = None,
    rx_spec: SteeringSpec | None = None,
) -> np.ndarray:
    """Draw one (rows, cols) Rician channel matrix.

    H = sqrt(pl) * ( sqrt(k/(k+1)) rx tx^H
                     + sqrt(1/(k+1)) (1/sqrt(L)) sum_l g_l rx_l tx_l^H )

    Scattered-path steering vectors are recomputed from angles perturbed
    uniformly within +-angular_spread_deg of the direct-path angles when the
    corresponding SteeringSpec is given; a side without a spec (e.g. a
    single-antenna user) reuses its direct-path response. With L = 0 only the
    direct term is drawn, at unit total power.
    """
    tx = np.asarray(tx_steering, dtype=np.complex128)
    rx = np.asarray(rx_steering, dtype=np.complex128)
    if tx.shape != (cols,) or rx.shape != (rows,):
        raise ValueError(
            f"steering lengths ({rx.size}, {tx.size}) do not match ({rows}, {cols})"
        )
    if pl_gain <= 0:
        raise ValueError("path-loss gain must be positive")

    los = np.outer(rx, np.conj(tx))
    L = params.nlos_path_count
    if L == 0:
        return np.sqrt(pl_gain) * los

    spread = np.deg2rad(params.angular_spread_deg)
    scattered = np.zeros((rows, cols), dtype=np.complex128)
    for _ in range(L):
        if rx_spec is not None:
            daz, del_ = rng.uniform(-spread, spread, size=2)
            rx_l = upa_steering(rx_spec.azimuth + daz, rx_spec.elevation + del_, rx_spec.geom)
        else:
            rx_l = rx
        if tx_spec is not None:
            daz, del_ = rng.uniform(-spread, spread, size=2)
            tx_l = upa_steering(tx_spec.azimuth + daz, tx_spec.elevation + del_, tx_spec.geom)
        else:
            tx_l = tx
        gain = (rng.standard_normal() + 1j * rng.standard_normal()) / np.sqrt(2.0)
        scattered += gain * np.outer(rx_l, np.conj(tx_l))

    kappa = 10.0 ** (params.rician_factor_db / 10.0)
    H = np.sqrt(kappa / (kappa + 1.0)) * los + np.sqrt(1.0 / (kappa + 1.0)) * scattered / np.sqrt(L)
    return np.sqrt(pl_gain) * H


def _draw_disc_positions(
    center: tuple[float, float], radius: float, count: int, height: float,
    rng: np.random.Generator,
) -> list[Position3D]:
    """Uniform positions inside a disc at the given height."""
    radii = radius * np.sqrt(rng.uniform(0.0, 1.0, size=count))
    angles = rng.uniform(0.0, 2.0 * np.pi, size=count)
    return [
        Position3D(center[0] + r * np.cos(a), center[1] + r * np.sin(a), height)
        for r, a in zip(radii, angles)
    ]


def _distance(a: Position3D, b: Position3D) -> float:
    return float(np.linalg.norm(a.as_array() - b.as_array()))


def gen_channel_set(scenario: ScenarioConfig, rng: np.random.Generator) -> ChannelSet:
    """Draw user positions and every channel matrix for one Monte Carlo drop."""
    scenario.validate()
    # independent child streams per family keeps e.g. the direct links
    # untouched when only surface-side parameters change
    s_pos1, s_pos2, s_g1, s_g2, s_hr1, s_hr2, s_hd2 = rng.spawn(7)

    K = scenario.users_per_cell
    users1 = _draw_disc_positions(
        scenario.cell1_center, scenario.cell1_radius, K, scenario.user_height, s_pos1
    )
    users2 = _draw_disc_positions(
        scenario.cell2_center, scenario.cell2_radius, K, scenario.user_height, s_pos2
    )

    c0 = scenario.pathloss_ref_db
    d0 = scenario.pathloss_ref_distance_m
    ris = scenario.ris_pos
    ris_geom = scenario.ris_array
    M = ris_geom.size

    def bs_to_ris(bs_pos: Position3D, bs_geom: ArrayGeometry, stream) -> np.ndarray:
        az_r, el_r = los_angles(ris, bs_pos)   # arrival side at the surface
        az_b, el_b = los_angles(bs_pos, ris)   # departure side at the BS
        pl = path_loss_linear(_distance(bs_pos, ris), scenario.bs_ris_link.path_loss_exponent, c0, d0)
        return gen_rician_matrix(
            M,
            bs_geom.size,
            upa_steering(az_b, el_b, bs_geom),
            upa_steering(az_r, el_r, ris_geom),
            scenario.bs_ris_link,
            pl,
            stream,
            tx_spec=SteeringSpec(bs_geom, az_b, el_b),
            rx_spec=SteeringSpec(ris_geom, az_r, el_r),
        )

    G1 = bs_to_ris(scenario.bs1_pos, scenario.bs1_array, s_g1)
    G2 = bs_to_ris(scenario.bs2_pos, scenario.bs2_array, s_g2)

    def ris_to_user(user: Position3D, stream) -> np.ndarray:
        az, el = los_angles(ris, user)
        pl = path_loss_linear(_distance(ris, user), scenario.ris_user_link.path_loss_exponent, c0, d0)
        # physical row is h^H (1, M); store the column vector h
        row = gen_rician_matrix(
            1,
            M,
            upa_steering(az, el, ris_geom),
            np.ones(1, dtype=np.complex128),
            scenario.ris_user_link,
            pl,
            stream,
            tx_spec=SteeringSpec(ris_geom, az, el),
        )
        return np.conj(row[0])

    h_r1 = np.stack([ris_to_user(u, s_hr1) for u in users1])
    h_r2 = np.stack([ris_to_user(u, s_hr2) for u in users2])

    def bs2_to_user(user: Position3D, stream) -> np.ndarray:
        az, el = los_angles(scenario.bs2_pos, user)
        pl = path_loss_linear(
            _distance(scenario.bs2_pos, user), scenario.direct_link.path_loss_exponent, c0, d0
        )
        row = gen_rician_matrix(
            1,
            scenario.bs2_array.size,
            upa_steering(az, el, scenario.bs2_array),
            np.ones(1, dtype=np.complex128),
            scenario.direct_link,
            pl,
            stream,
            tx_spec=SteeringSpec(scenario.bs2_array, az, el),
        )
        return np.conj(row[0])

    h_d2 = np.stack([bs2_to_user(u, s_hd2) for u in users2])

    noise = scenario.noise_var_w
    return ChannelSet(
        G1=G1,
        G2=G2,
        h_r1=h_r1,
        h_r2=h_r2,
        h_d2=h_d2,
        noise_var_1=noise,
        noise_var_2=noise,
        theta=scenario.theta_rad,
    )
