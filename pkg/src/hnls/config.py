"""Strict INI-style scenario configuration files.

Sections group keys by subsystem; unknown sections or keys are fatal so a
misspelled constant cannot silently fall back to a default.  Numeric
values accept plain floats plus the forms `pi`, `<k>*pi` and `<k>pi`
(boundary frequencies like 4*pi are common).  The exact key set is
documented in the README.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from typing import Optional

from .boundary import BoundaryProfile, MovingDomain
from .errors import ConfigError
from .scenarios import InitialCondition, Scenario, SechPulse

_SECTION_KEYS = {
    "scenario": {"name", "gamma", "chi", "cubic_sign", "t", "dt", "m"},
    "domain": {"alpha", "beta", "min_width", "max_width"},
    "initial": {
        "kind", "amplitude", "width", "center", "phase_velocity",
        "amplitude2", "width2", "center2", "phase_velocity2",
    },
    "scheme": {"delta_hat", "max_picard", "coeff_time"},
    "outputs": {"norms_csv", "snapshots", "snapshot_prefix"},
    "sweep": {"beta_offsets"},
    "convergence": {"space_levels", "time_levels", "reference", "space_dt"},
}

_PROFILE_ARITY = {"constant": 1, "linear": 2, "sinusoidal": 3, "piecewise_absolute": 3}


def parse_number(text: str) -> float:
    """Float literal, optionally a multiple of pi: '4*pi', '-0.5pi', 'pi'."""
    s = text.strip().lower()
    if "pi" in s:
        head = s.replace("*", "").removesuffix("pi").strip()
        if head in ("", "+"):
            return math.pi
        if head == "-":
            return -math.pi
        try:
            return float(head) * math.pi
        except ValueError:
            raise ConfigError(f"cannot parse number {text!r}") from None
    try:
        return float(s)
    except ValueError:
        raise ConfigError(f"cannot parse number {text!r}") from None


def _parse_number_list(text: str) -> list[float]:
    items = [t for t in text.split(",") if t.strip()]
    if not items:
        raise ConfigError(f"empty list {text!r}")
    return [parse_number(t) for t in items]


def _parse_profile(text: str, where: str) -> BoundaryProfile:
    s = text.strip()
    if "(" not in s or not s.endswith(")"):
        raise ConfigError(f"{where}: expected kind(args...), got {text!r}")
    kind, args = s.split("(", 1)
    kind = kind.strip().lower()
    if kind not in _PROFILE_ARITY:
        raise ConfigError(f"{where}: unknown profile kind {kind!r}")
    params = _parse_number_list(args[:-1])
    if len(params) != _PROFILE_ARITY[kind]:
        raise ConfigError(
            f"{where}: {kind} takes {_PROFILE_ARITY[kind]} parameters, got {len(params)}"
        )
    return BoundaryProfile(kind, tuple(params))


@dataclass(frozen=True)
class OutputSpec:
    norms_csv: Optional[str] = None
    snapshots: tuple[float, ...] = ()
    snapshot_prefix: str = "snapshot"


@dataclass(frozen=True)
class SweepSpec:
    beta_offsets: tuple[float, ...] = (10.0, 20.0, 40.0, 60.0)


@dataclass(frozen=True)
class ConvergenceSpec:
    space_levels: tuple[int, ...] = (80, 160, 320)
    time_levels: tuple[float, ...] = (2e-2, 1e-2, 5e-3)
    reference: str = "self"
    space_dt: Optional[float] = None


@dataclass(frozen=True)
class ScenarioSpec:
    """Parsed configuration: the scenario plus solver and output options."""

    scenario: Scenario
    delta_hat: float = 1e-14
    max_picard: int = 100
    coeff_time: str = "tn"
    outputs: OutputSpec = field(default_factory=OutputSpec)
    sweep: SweepSpec = field(default_factory=SweepSpec)
    convergence: ConvergenceSpec = field(default_factory=ConvergenceSpec)


def _required(section, key: str, path: str, name: str):
    if key not in section:
        raise ConfigError(f"{path}: missing key {name}.{key}")
    return section[key]


def _build_initial(section, path: str) -> InitialCondition:
    kind = _required(section, "kind", path, "initial").strip().lower()
    if kind == "zero":
        extra = set(section) - {"kind"}
        if extra:
            raise ConfigError(f"{path}: zero initial condition takes no keys {sorted(extra)}")
        return InitialCondition("zero")

    def pulse(suffix: str) -> SechPulse:
        return SechPulse(
            amplitude=parse_number(_required(section, "amplitude" + suffix, path, "initial")),
            width=parse_number(_required(section, "width" + suffix, path, "initial")),
            center=parse_number(_required(section, "center" + suffix, path, "initial")),
            phase_velocity=parse_number(section.get("phase_velocity" + suffix, "0")),
        )

    if kind == "sech_soliton":
        for k in section:
            if k.endswith("2"):
                raise ConfigError(f"{path}: key initial.{k} only applies to two_soliton")
        return InitialCondition("sech_soliton", (pulse(""),))
    if kind == "two_soliton":
        return InitialCondition("two_soliton", (pulse(""), pulse("2")))
    raise ConfigError(f"{path}: unknown initial condition kind {kind!r}")


def parse_config(path: str) -> ScenarioSpec:
    """Parse and validate a scenario file; any unknown key is an error."""
    cp = configparser.ConfigParser(interpolation=None)
    try:
        with open(path) as fh:
            cp.read_file(fh, source=path)
    except OSError as err:
        raise ConfigError(f"cannot read {path}: {err}") from err
    except configparser.Error as err:
        raise ConfigError(f"{path}: {err}") from err

    for sec in cp.sections():
        low = sec.lower()
        if low not in _SECTION_KEYS:
            raise ConfigError(f"{path}: unknown section [{sec}]")
        for key in cp[sec]:
            if key.lower() not in _SECTION_KEYS[low]:
                raise ConfigError(f"{path}: unknown key {sec}.{key}")

    for needed in ("scenario", "domain", "initial"):
        if not cp.has_section(needed):
            raise ConfigError(f"{path}: missing section [{needed}]")

    sc = cp["scenario"]
    dom_sec = cp["domain"]
    try:
        T = parse_number(_required(sc, "t", path, "scenario"))
        domain = MovingDomain(
            alpha=_parse_profile(_required(dom_sec, "alpha", path, "domain"), path),
            beta=_parse_profile(_required(dom_sec, "beta", path, "domain"), path),
            alpha0=parse_number(dom_sec.get("min_width", "1e-9")),
            beta0=parse_number(dom_sec.get("max_width", "1e12")),
            horizon=T,
        )
        scenario = Scenario(
            name=_required(sc, "name", path, "scenario").strip(),
            gamma=parse_number(_required(sc, "gamma", path, "scenario")),
            chi=parse_number(_required(sc, "chi", path, "scenario")),
            cubic_sign=parse_number(sc.get("cubic_sign", "1")),
            domain=domain,
            initial=_build_initial(cp["initial"], path),
            M=int(parse_number(_required(sc, "m", path, "scenario"))),
            dt=parse_number(_required(sc, "dt", path, "scenario")),
            T=T,
        )
        if scenario.T <= 0.0:
            raise ConfigError(f"{path}: scenario.t must be positive")

        kw = {}
        if cp.has_section("scheme"):
            s = cp["scheme"]
            kw["delta_hat"] = parse_number(s.get("delta_hat", "1e-14"))
            kw["max_picard"] = int(parse_number(s.get("max_picard", "100")))
            kw["coeff_time"] = s.get("coeff_time", "tn").strip().lower()
            if kw["coeff_time"] not in ("tn", "midpoint"):
                raise ConfigError(f"{path}: scheme.coeff_time must be tn or midpoint")

        outputs = OutputSpec()
        if cp.has_section("outputs"):
            o = cp["outputs"]
            outputs = OutputSpec(
                norms_csv=o.get("norms_csv", None),
                snapshots=tuple(_parse_number_list(o["snapshots"])) if "snapshots" in o else (),
                snapshot_prefix=o.get("snapshot_prefix", "snapshot").strip(),
            )

        sweep = SweepSpec()
        if cp.has_section("sweep"):
            sweep = SweepSpec(
                beta_offsets=tuple(_parse_number_list(cp["sweep"].get("beta_offsets", "10, 20, 40, 60")))
            )

        conv = ConvergenceSpec()
        if cp.has_section("convergence"):
            c = cp["convergence"]
            ref = c.get("reference", "self").strip().lower()
            if ref not in ("self", "oracle"):
                raise ConfigError(f"{path}: convergence.reference must be self or oracle")
            conv = ConvergenceSpec(
                space_levels=tuple(
                    int(v) for v in _parse_number_list(c.get("space_levels", "80, 160, 320"))
                ),
                time_levels=tuple(_parse_number_list(c.get("time_levels", "0.02, 0.01, 0.005"))),
                reference=ref,
                space_dt=parse_number(c["space_dt"]) if "space_dt" in c else None,
            )
    except ConfigError:
        raise
    except (ValueError, KeyError) as err:
        raise ConfigError(f"{path}: {err}") from err

    return ScenarioSpec(
        scenario=scenario,
        outputs=outputs,
        sweep=sweep,
        convergence=conv,
        **kw,
    )
