"""Information orderings between classical and quantum dichotomies."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import reproduce_json as _reproduce_json

__version__ = "0.1.0"


def reproduce(alpha, beta, allow_out_of_hypothesis=False):
    """Run the counterexample pipeline and return the report as a dict."""
    return _json.loads(_reproduce_json(alpha, beta, allow_out_of_hypothesis))
