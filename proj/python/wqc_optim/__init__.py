"""First-order methods for weakly-quasi-convex objectives.

Python bindings over the C++ core: built-in test objectives, sampled
function-class certification, gradient descent and the accelerated schemes
with their rate envelopes, optimal quadratic averaging, and the LQR
policy-optimization testbed.
"""

try:
    # wheel layout: the extension lives inside the package
    from ._wqc_optim import *  # noqa: F401,F403
except ImportError:
    # build-tree layout: the extension sits on PYTHONPATH
    from _wqc_optim import *  # noqa: F401,F403
