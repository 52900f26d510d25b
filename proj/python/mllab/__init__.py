"""Belief-dynamics lab: python surface over the compiled core."""

try:
    from mllab._mllab import *  # noqa: F401,F403  (installed layout)
    from mllab._mllab import __version__  # noqa: F401
except ImportError:  # build-tree layout: extension on PYTHONPATH directly
    from _mllab import *  # noqa: F401,F403
    from _mllab import __version__  # noqa: F401
