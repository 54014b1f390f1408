"""Package scenario model: materials, layer stack, antennas, arrays.

A :class:`Scenario` is a fully validated description of one simulation
setup: the flip-chip layer stack, the chip extent, every monopole element
with its feed port, the excitation frequency and the boundary policy.
Scenarios are immutable after validation and safe to share.

Canonical units here are mm and GHz; conversion to SI happens inside the
solver.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass, field
from importlib import resources

from .constants import C0, GHZ, MM
from .errors import ValidationError

FACES = ("x_low", "x_high", "y_low", "y_high", "z_low", "z_high")

PEC = "perfect_conductor"
ABSORBING = "absorbing"


def wavelength_in_medium(frequency_ghz: float, rel_permittivity: float) -> float:
    """Plane-wave wavelength in mm for a given frequency and permittivity.

    Returns c0 / (sqrt(eps_r) * f).
    """
    if frequency_ghz <= 0:
        raise ValidationError(f"frequency must be positive, got {frequency_ghz}")
    if rel_permittivity < 1.0:
        raise ValidationError(
            f"relative permittivity must be >= 1, got {rel_permittivity}"
        )
    return C0 / (math.sqrt(rel_permittivity) * frequency_ghz * GHZ) / MM


def monopole_quarter_wave_length(frequency_ghz: float, rel_permittivity: float) -> float:
    """Quarter-wave monopole length in mm over a ground plane.

    This is the analytic starting point for the antenna; the in-package
    resonance shifts and the length is fine-tuned afterwards (see
    ``ports.tune_monopole_length``).
    """
    return wavelength_in_medium(frequency_ghz, rel_permittivity) / 4.0


@dataclass(frozen=True)
class MaterialSpec:
    """One material: permittivity plus exactly one loss representation.

    Loss is given either as a bulk resistivity in ohm*cm (semiconductors),
    a loss tangent (insulators), or the material is a perfect conductor.
    """

    name: str
    rel_permittivity: float = 1.0
    resistivity_ohm_cm: float | None = None
    loss_tangent: float | None = None
    perfect_conductor: bool = False

    def __post_init__(self):
        n_loss = sum(
            (
                self.resistivity_ohm_cm is not None,
                self.loss_tangent is not None,
                bool(self.perfect_conductor),
            )
        )
        if n_loss != 1:
            raise ValidationError(
                f"material '{self.name}': exactly one loss representation "
                f"must be set (got {n_loss})"
            )
        if not self.perfect_conductor and self.rel_permittivity < 1.0:
            raise ValidationError(
                f"material '{self.name}': rel_permittivity must be >= 1"
            )
        if self.resistivity_ohm_cm is not None and self.resistivity_ohm_cm <= 0:
            raise ValidationError(
                f"material '{self.name}': resistivity must be positive"
            )
        if self.loss_tangent is not None and self.loss_tangent < 0:
            raise ValidationError(
                f"material '{self.name}': loss tangent must be >= 0"
            )

    def conductivity_s_per_m(self, frequency_ghz: float) -> float:
        """Effective conductivity at a frequency (loss tangent -> sigma)."""
        if self.perfect_conductor:
            return math.inf
        if self.resistivity_ohm_cm is not None:
            return 100.0 / self.resistivity_ohm_cm
        from .constants import EPS0

        omega = 2.0 * math.pi * frequency_ghz * GHZ
        return omega * EPS0 * self.rel_permittivity * self.loss_tangent


VACUUM = MaterialSpec("vacuum", 1.0, loss_tangent=0.0)


@dataclass(frozen=True)
class Layer:
    material: MaterialSpec
    thickness_mm: float

    def __post_init__(self):
        if self.thickness_mm <= 0:
            raise ValidationError(
                f"layer '{self.material.name}': thickness must be positive"
            )


@dataclass(frozen=True)
class LayerStack:
    """Ordered layers, top-to-bottom, plus an optional lateral spacer.

    The bottom layer must be a conductor: it is the bump/interconnect
    plane that acts as the ground plane for the vertical monopoles.
    """

    layers: tuple[Layer, ...]
    lateral_spacer: Layer | None = None

    def __post_init__(self):
        if not self.layers:
            raise ValidationError("layer stack is empty")
        if not self.layers[-1].material.perfect_conductor:
            raise ValidationError(
                "bottom stack layer must be a conductor (ground plane), "
                f"got '{self.layers[-1].material.name}'"
            )

    @property
    def total_height_mm(self) -> float:
        return sum(l.thickness_mm for l in self.layers)

    def host_layer(self) -> Layer:
        """The dielectric layer that hosts the monopoles (thickest one)."""
        dielectrics = [l for l in self.layers if not l.material.perfect_conductor]
        if not dielectrics:
            raise ValidationError("stack has no dielectric layer to host antennas")
        return max(dielectrics, key=lambda l: l.thickness_mm)


@dataclass(frozen=True)
class MonopoleElement:
    """Vertical monopole: a thin wire rising from the insulator interface."""

    port_id: int
    position_mm: tuple[float, float]
    length_mm: float
    radius_mm: float

    def __post_init__(self):
        if self.length_mm <= 0 or self.radius_mm <= 0:
            raise ValidationError(
                f"port {self.port_id}: length and radius must be positive"
            )
        if self.length_mm / self.radius_mm <= 10.0:
            raise ValidationError(
                f"port {self.port_id}: aspect ratio length/radius must exceed 10 "
                "(thin-wire model)"
            )


@dataclass(frozen=True)
class ArrayLayout:
    """Regular rows x cols grid of elements with row-major port numbering."""

    origin_mm: tuple[float, float]
    rows: int
    cols: int
    spacing_mm: float
    port_ids: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValidationError("array layout needs rows >= 1 and cols >= 1")
        if self.spacing_mm <= 0:
            raise ValidationError("array spacing must be positive")
        if len(self.port_ids) != self.rows * self.cols:
            raise ValidationError(
                f"layout declares {self.rows}x{self.cols} elements but "
                f"{len(self.port_ids)} port ids"
            )

    def positions(self) -> list[tuple[int, tuple[float, float]]]:
        """(port_id, (x, y)) for every element, row-major from the origin."""
        out = []
        x0, y0 = self.origin_mm
        for r in range(self.rows):
            for c in range(self.cols):
                pid = self.port_ids[r * self.cols + c]
                out.append((pid, (x0 + c * self.spacing_mm, y0 + r * self.spacing_mm)))
        return out

    @property
    def span_mm(self) -> tuple[float, float]:
        return ((self.cols - 1) * self.spacing_mm, (self.rows - 1) * self.spacing_mm)


def array_footprint(layout: ArrayLayout) -> float:
    """Chip area occupied by the array in mm^2 (product of spans).

    Degenerate single-row/column layouts span zero area; use
    ``layout.span_mm`` for the line length in that case.
    """
    sx, sy = layout.span_mm
    return sx * sy


@dataclass(frozen=True)
class GridPolicy:
    """Spatial resolution request: lateral cells per wavelength in the
    densest medium, plus an integer vertical refinement (dz = dx / refine)."""

    cells_per_wavelength: int = 10
    vertical_refine: int = 1

    def __post_init__(self):
        if self.cells_per_wavelength < 10:
            raise ValidationError(
                "grid policy must resolve at least 10 cells per wavelength"
            )
        if self.vertical_refine < 1:
            raise ValidationError("vertical_refine must be >= 1")


@dataclass(frozen=True)
class Scenario:
    """Validated simulation setup. Immutable; safe to share across threads."""

    name: str
    chip_extent_mm: tuple[float, float]
    stack: LayerStack
    elements: tuple[MonopoleElement, ...]
    frequency_ghz: float
    boundaries: dict = field(default_factory=lambda: {f: PEC for f in FACES})
    grid: GridPolicy = field(default_factory=GridPolicy)

    def __post_init__(self):
        if self.frequency_ghz <= 0:
            raise ValidationError("frequency must be positive")
        if self.chip_extent_mm[0] <= 0 or self.chip_extent_mm[1] <= 0:
            raise ValidationError("chip extent must be positive")
        if not self.elements:
            raise ValidationError("no antenna elements")
        w, d = self.chip_extent_mm
        seen: set[int] = set()
        host = self.stack.host_layer()
        for el in self.elements:
            if el.port_id in seen:
                raise ValidationError(f"duplicate port id {el.port_id}")
            seen.add(el.port_id)
            x, y = el.position_mm
            if not (0.0 <= x <= w and 0.0 <= y <= d):
                raise ValidationError(
                    f"element outside chip extent: port {el.port_id} at "
                    f"({x:g}, {y:g}) mm on a {w:g}x{d:g} mm chip"
                )
            if el.length_mm >= host.thickness_mm:
                raise ValidationError(
                    f"port {el.port_id}: monopole length {el.length_mm:g} mm must "
                    f"stay below the {host.material.name} layer thickness "
                    f"{host.thickness_mm:g} mm"
                )
        for i, a in enumerate(self.elements):
            for b in self.elements[i + 1:]:
                dx = a.position_mm[0] - b.position_mm[0]
                dy = a.position_mm[1] - b.position_mm[1]
                if math.hypot(dx, dy) < a.radius_mm + b.radius_mm:
                    raise ValidationError(
                        f"elements {a.port_id} and {b.port_id} overlap"
                    )
        unknown = set(self.boundaries) - set(FACES)
        if unknown or set(FACES) - set(self.boundaries):
            raise ValidationError(f"boundary policy must cover faces {FACES}")
        for f, v in self.boundaries.items():
            if v not in (PEC, ABSORBING):
                raise ValidationError(f"unknown boundary condition '{v}' on {f}")
        if self.boundaries["z_low"] != PEC:
            raise ValidationError("z_low boundary must be perfect_conductor "
                                  "(bump ground plane)")

    @property
    def port_ids(self) -> tuple[int, ...]:
        return tuple(el.port_id for el in self.elements)

    def element(self, port_id: int) -> MonopoleElement:
        for el in self.elements:
            if el.port_id == port_id:
                return el
        raise ValidationError(f"no element with port id {port_id}")

    def max_permittivity(self) -> float:
        eps = [l.material.rel_permittivity for l in self.stack.layers
               if not l.material.perfect_conductor]
        if self.stack.lateral_spacer is not None:
            eps.append(self.stack.lateral_spacer.material.rel_permittivity)
        return max(eps)

    def min_permittivity(self) -> float:
        eps = [l.material.rel_permittivity for l in self.stack.layers
               if not l.material.perfect_conductor]
        if self.stack.lateral_spacer is not None:
            eps.append(self.stack.lateral_spacer.material.rel_permittivity)
        return min(eps)

    def wavelength_mm(self, frequency_ghz: float | None = None) -> float:
        """Wavelength in the densest medium at the given (default: scenario)
        frequency."""
        f = self.frequency_ghz if frequency_ghz is None else frequency_ghz
        return wavelength_in_medium(f, self.max_permittivity())

    def with_elements(self, elements) -> "Scenario":
        return dataclasses.replace(self, elements=tuple(elements))

    def with_frequency(self, frequency_ghz: float) -> "Scenario":
        return dataclasses.replace(self, frequency_ghz=frequency_ghz)

    def fingerprint(self) -> str:
        """Stable hash of the geometry-defining fields."""
        payload = json.dumps(scenario_to_dict(self), sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


def place_array(scenario: Scenario, layout: ArrayLayout,
                element_template: MonopoleElement) -> Scenario:
    """Extend a scenario with a rows x cols array of template monopoles.

    Element r,c sits at origin + (c*spacing, r*spacing); port ids come from
    the layout (row-major) and must be fresh.
    """
    if layout.spacing_mm <= 2.0 * element_template.radius_mm:
        raise ValidationError("array spacing must exceed twice the element radius")
    existing = set(scenario.port_ids)
    w, d = scenario.chip_extent_mm
    new = []
    for pid, (x, y) in layout.positions():
        if pid in existing:
            raise ValidationError(f"port id {pid} already used in scenario")
        if not (0.0 <= x <= w and 0.0 <= y <= d):
            raise ValidationError(
                f"array element at ({x:g}, {y:g}) mm falls outside the "
                f"{w:g}x{d:g} mm chip"
            )
        new.append(dataclasses.replace(element_template, port_id=pid,
                                       position_mm=(x, y)))
    return scenario.with_elements(scenario.elements + tuple(new))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _material_to_dict(m: MaterialSpec) -> dict:
    d: dict = {"rel_permittivity": m.rel_permittivity}
    if m.perfect_conductor:
        d = {"perfect_conductor": True}
    elif m.resistivity_ohm_cm is not None:
        d["resistivity_ohm_cm"] = m.resistivity_ohm_cm
    else:
        d["loss_tangent"] = m.loss_tangent
    return d


def _material_from_dict(name: str, d: dict) -> MaterialSpec:
    if d.get("perfect_conductor"):
        return MaterialSpec(name, perfect_conductor=True)
    return MaterialSpec(
        name,
        rel_permittivity=float(d.get("rel_permittivity", 1.0)),
        resistivity_ohm_cm=(float(d["resistivity_ohm_cm"])
                            if "resistivity_ohm_cm" in d else None),
        loss_tangent=(float(d["loss_tangent"]) if "loss_tangent" in d else None),
    )


def scenario_to_dict(sc: Scenario) -> dict:
    mats: dict[str, dict] = {}
    for l in sc.stack.layers:
        mats[l.material.name] = _material_to_dict(l.material)
    if sc.stack.lateral_spacer is not None:
        mats[sc.stack.lateral_spacer.material.name] = _material_to_dict(
            sc.stack.lateral_spacer.material)
    return {
        "name": sc.name,
        "frequency_ghz": sc.frequency_ghz,
        "chip_extent_mm": list(sc.chip_extent_mm),
        "materials": mats,
        "stack": [{"material": l.material.name, "thickness_mm": l.thickness_mm}
                  for l in sc.stack.layers],
        "lateral_spacer": (
            None if sc.stack.lateral_spacer is None else
            {"material": sc.stack.lateral_spacer.material.name,
             "thickness_mm": sc.stack.lateral_spacer.thickness_mm}),
        "elements": [{"port_id": el.port_id,
                      "position_mm": list(el.position_mm),
                      "length_mm": el.length_mm,
                      "radius_mm": el.radius_mm} for el in sc.elements],
        "boundaries": dict(sc.boundaries),
        "grid": {"cells_per_wavelength": sc.grid.cells_per_wavelength,
                 "vertical_refine": sc.grid.vertical_refine},
    }


def scenario_to_json(sc: Scenario) -> str:
    return json.dumps(scenario_to_dict(sc), indent=2, sort_keys=True)


def load_scenario(config_text: str) -> Scenario:
    """Parse and validate a JSON scenario description.

    Raises ValidationError naming the violated invariant, or ValueError on
    malformed JSON.
    """
    try:
        raw = json.loads(config_text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"scenario config is not valid JSON: {e}") from e
    return scenario_from_dict(raw)


def scenario_from_dict(raw: dict) -> Scenario:
    try:
        mats = {name: _material_from_dict(name, d)
                for name, d in raw.get("materials", {}).items()}
        mats.setdefault("vacuum", VACUUM)
        layers = []
        for entry in raw["stack"]:
            mname = entry["material"]
            if mname not in mats:
                raise ValidationError(f"stack references undefined material '{mname}'")
            layers.append(Layer(mats[mname], float(entry["thickness_mm"])))
        spacer = None
        if raw.get("lateral_spacer"):
            s = raw["lateral_spacer"]
            if s["material"] not in mats:
                raise ValidationError(
                    f"lateral spacer references undefined material '{s['material']}'")
            spacer = Layer(mats[s["material"]], float(s["thickness_mm"]))
        stack = LayerStack(tuple(layers), spacer)
        elements = tuple(
            MonopoleElement(
                port_id=int(e["port_id"]),
                position_mm=(float(e["position_mm"][0]), float(e["position_mm"][1])),
                length_mm=float(e["length_mm"]),
                radius_mm=float(e["radius_mm"]),
            )
            for e in raw.get("elements", [])
        )
        grid_raw = raw.get("grid", {})
        grid = GridPolicy(
            cells_per_wavelength=int(grid_raw.get("cells_per_wavelength", 10)),
            vertical_refine=int(grid_raw.get("vertical_refine", 1)),
        )
        boundaries = raw.get("boundaries") or {f: PEC for f in FACES}
        return Scenario(
            name=str(raw.get("name", "unnamed")),
            chip_extent_mm=(float(raw["chip_extent_mm"][0]),
                            float(raw["chip_extent_mm"][1])),
            stack=stack,
            elements=elements,
            frequency_ghz=float(raw["frequency_ghz"]),
            boundaries=dict(boundaries),
            grid=grid,
        )
    except KeyError as e:
        raise ValidationError(f"scenario config missing required key: {e}") from e


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------

PRESET_NAMES = (
    "flipchip-60ghz",
    "flipchip-60ghz-spacer",
    "flipchip-110ghz",
    "two-corner-arrays",
    "lateral-arrays",
    "two-bare-monopoles",
    "coupling-pair",
    "coupling-array",
)


def preset_text(name: str) -> str:
    """Raw JSON text of a shipped scenario preset."""
    if name not in PRESET_NAMES:
        raise ValidationError(
            f"unknown preset '{name}'; available: {', '.join(PRESET_NAMES)}")
    return (resources.files("chipwave.presets") / f"{name}.json").read_text()


def load_preset(name: str) -> Scenario:
    return load_scenario(preset_text(name))
