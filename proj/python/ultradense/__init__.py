"""Partial isomorphisms, density witnesses and certificate checks."""

import json

from ._ultradense import (
    Error,
    HypothesisError,
    IsoRejection,
    OracleExhausted,
    components,
    compose,
    evaluate_word,
    piccard_partner,
    power,
    reduce_word,
    sigma_feasible,
    run_trial,
    validate,
    verify,
)
from ._ultradense import run_campaign as _run_campaign


def run_campaign(spec):
    """Run a campaign from a spec dict; returns the summary dict."""
    return json.loads(_run_campaign(json.dumps(spec)))


__all__ = [
    "Error",
    "HypothesisError",
    "IsoRejection",
    "OracleExhausted",
    "components",
    "compose",
    "evaluate_word",
    "piccard_partner",
    "power",
    "reduce_word",
    "run_campaign",
    "run_trial",
    "sigma_feasible",
    "validate",
    "verify",
]
