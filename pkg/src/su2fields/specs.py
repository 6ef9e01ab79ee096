"""Generator specifications read from JSON.

A spec names one generator and its parameters, for example

    {"generator": "gaussian_bi_invariant", "band_limit_doubled": 2,
     "power_spectrum": [1.0, 0.5, 0.25], "seed": 7, "samples": 100000}

Generators and their keys:

- ``gaussian_bi_invariant``: ``power_spectrum`` (one sigma^2 per degree)
- ``gaussian_left_invariant``: ``K`` (one (2l+1)x(2l+1) matrix per degree;
  entries are numbers or [re, im] pairs)
- ``rotated``: ``template`` (a coefficient object or ``{"delta": [2l, 2m, 2s]}``)
  and ``side`` (left, right or bi)
- ``spin_measure``: ``two_ell`` and ``mu`` (masses over s ascending)

Optional keys: ``seed``, ``samples``, ``targets`` (list of index-triple
pairs; default all pairs up to the band limit) and ``degree`` (restrict
spin spectra to one degree).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .errors import InvalidIndexError, InvalidSpecError
from .group import check_triple
from .harmonic import SpectralCoefficients
from .random_fields import (
    CorrelationModel,
    CovarianceSpec,
    GaussianModel,
    RotatedTemplateModel,
    SpinMeasure,
    SpinMeasureModel,
    all_pairs,
    gen_gaussian_bi_invariant,
    gen_gaussian_left_invariant,
    gen_rotated,
    realize_spin_measure,
)

GENERATORS = ("gaussian_bi_invariant", "gaussian_left_invariant", "rotated", "spin_measure")


@dataclass
class GeneratorConfig:
    name: str
    two_L: int
    draw: object  # callable (rng, size) -> SpectralCoefficients
    model: CorrelationModel
    seed: int
    samples: int
    targets: List[Tuple[tuple, tuple]]
    degree: Optional[int] = None


def _complex_matrix(obj) -> np.ndarray:
    arr = np.asarray(obj, dtype=float)
    if arr.ndim == 3 and arr.shape[-1] == 2:
        return arr[..., 0] + 1j * arr[..., 1]
    if arr.ndim == 2:
        return arr.astype(complex)
    raise InvalidSpecError("matrix entries must be numbers or [re, im] pairs")


def _template(obj, two_L: Optional[int]) -> SpectralCoefficients:
    if "delta" in obj:
        n, tm, ts = (int(x) for x in obj["delta"])
        check_triple(n, tm, ts)
        return SpectralCoefficients.delta(n, tm, ts, two_L=two_L if two_L is not None else n)
    return SpectralCoefficients.from_dict(obj)


def _triple(x) -> tuple:
    t = tuple(int(v) for v in x)
    if len(t) != 3:
        raise InvalidSpecError(f"index triple expected, got {x!r}")
    check_triple(*t)
    return t


def parse_spec(obj: dict) -> GeneratorConfig:
    """Build a generator, its prediction model and run settings from a spec dict."""
    try:
        return _parse(obj)
    except InvalidSpecError:
        raise
    except (KeyError, TypeError, ValueError, InvalidIndexError) as exc:
        raise InvalidSpecError(f"malformed generator spec: {exc!r}") from exc


def _parse(obj: dict) -> GeneratorConfig:
    if not isinstance(obj, dict):
        raise InvalidSpecError("spec must be a JSON object")
    name = obj.get("generator")
    if name not in GENERATORS:
        raise InvalidSpecError(f"generator must be one of {GENERATORS}, got {name!r}")
    two_L = obj.get("band_limit_doubled")
    if name in ("gaussian_bi_invariant", "gaussian_left_invariant"):
        variant = name.replace("gaussian_", "")
        if variant == "bi_invariant":
            cov = CovarianceSpec(variant, int(two_L), power_spectrum=obj["power_spectrum"])
            draw = lambda rng, size=None: gen_gaussian_bi_invariant(cov, rng, size)  # noqa: E731
        else:
            cov = CovarianceSpec(variant, int(two_L), K=[_complex_matrix(k) for k in obj["K"]])
            draw = lambda rng, size=None: gen_gaussian_left_invariant(cov, rng, size)  # noqa: E731
        model, two_L = GaussianModel(cov), cov.two_L
    elif name == "rotated":
        template = _template(obj["template"], None if two_L is None else int(two_L))
        side = obj.get("side", "bi")
        if side not in ("left", "right", "bi"):
            raise InvalidSpecError("side must be left, right or bi")
        if not float(template.norm_squared()) > 0:
            raise InvalidSpecError("template field is zero")
        draw = lambda rng, size=None: gen_rotated(template, side, rng, size)  # noqa: E731
        model, two_L = RotatedTemplateModel(template, side), template.two_L
    else:
        mu = SpinMeasure(int(obj["two_ell"]), tuple(obj["mu"]))
        draw = lambda rng, size=None: realize_spin_measure(mu, rng, size)  # noqa: E731
        model, two_L = SpinMeasureModel(mu), mu.two_ell
    if two_L > 64:
        raise InvalidSpecError("band limit above 64")
    if "targets" in obj:
        targets = [(_triple(a), _triple(b)) for a, b in obj["targets"]]
        if any(t[0] > two_L for pair in targets for t in pair):
            raise InvalidSpecError("target degree above the band limit")
    else:
        targets = all_pairs(two_L)
    degree = obj.get("degree")
    if degree is not None and not 0 <= int(degree) <= two_L:
        raise InvalidSpecError("degree outside the band limit")
    seed = int(obj.get("seed", 0))
    samples = int(obj.get("samples", 10_000))
    if seed < 0 or samples < 1:
        raise InvalidSpecError("seed must be nonnegative and samples positive")
    return GeneratorConfig(name, two_L, draw, model, seed, samples, targets, None if degree is None else int(degree))


def load_spec(path: str) -> GeneratorConfig:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidSpecError(f"cannot read spec {path}: {exc}") from exc
    return parse_spec(obj)
