"""Hierarchical non-Gaussian coherence thresholds."""

import json

from ._qngc import (
    Error,
    EnvelopeError,
    GridError,
    IndexError,
    ModelValidityError,
    NoDepthError,
    SpecError,
    StateError,
    TruncationError,
    ValidationError,
    apply_gaussian,
    coherence_element,
    coherence_from_scan,
    displacement_unitary,
    exact_channel,
    loss_depth,
    perturbed_state,
    phase_scan,
    physical_boundary,
    run_cli,
    squeezing_unitary,
    thermal_depth,
)
from . import _qngc


def _config(config):
    return json.dumps(config) if config else ""


def absolute_threshold(m, n, kind, order=1, config=None):
    return json.loads(_qngc.absolute_threshold_json(m, n, kind, order, _config(config)))


def convergence_study(m, n, N_range, excluded, config=None):
    return json.loads(_qngc.convergence_json(m, n, list(N_range), excluded, _config(config)))


def relative_curve(m, n, observable, kind, order, lambda_grid, p_grid, config=None):
    return json.loads(
        _qngc.relative_curve_json(m, n, observable, kind, order, list(lambda_grid), list(p_grid), _config(config))
    )
