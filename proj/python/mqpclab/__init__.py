"""Deterministic simulator and security laboratory for a multi-party
private-comparison protocol over d-dimensional entangled pairs.

The heavy lifting lives in the compiled extension ``mqpclab._core``; this
package adds keyword-friendly wrappers around its JSON-configuration entry
points.
"""

import json as _json

from ._core import (
    announcement_permitted_set,
    attack_experiment,
    audit_unitary,
    consistent_set,
    controlled_shift_unitary,
    demo,
    detection_probability,
    efficiency_closed_form,
    haar_unitary,
    otp_bijection_holds,
    otp_uniformity,
    probe_only_unitary,
    render_ordering,
    run,
    theorem_scan,
)

__version__ = "0.1.0"

__all__ = [
    "announcement_permitted_set",
    "attack_experiment",
    "audit_unitary",
    "consistent_set",
    "controlled_shift_unitary",
    "demo",
    "detection_probability",
    "efficiency_closed_form",
    "haar_unitary",
    "make_config",
    "otp_bijection_holds",
    "otp_uniformity",
    "probe_only_unitary",
    "render_ordering",
    "run",
    "run_protocol",
    "theorem_scan",
    "__version__",
]


def make_config(d, *, n=None, L=1, seed=0, p=None, attack="honest", attack_params=None):
    """Build the JSON configuration string accepted by :func:`run`.

    Provide either ``p`` (explicit private inputs, which also fixes ``n``) or
    ``n`` (inputs are then drawn deterministically from ``seed``).
    """
    config = {"d": d, "L": L, "seed": seed}
    if p is not None:
        config["p"] = list(p)
        if n is not None:
            config["n"] = n
    elif n is not None:
        config["n"] = n
    else:
        raise ValueError("provide n or p")
    if attack != "honest":
        config["attack"] = attack
    if attack_params:
        config["attack_params"] = attack_params
    return _json.dumps(config)


def run_protocol(d, **kwargs):
    """Run one protocol instance; keyword arguments as in :func:`make_config`."""
    return run(make_config(d, **kwargs))
