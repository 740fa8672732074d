"""Cosine-band attenuation estimation and waveform correction."""

try:
    from ._specorr import *  # noqa: F401,F403
    from ._specorr import __doc__  # noqa: F401
except ImportError:  # running against a plain CMake build tree
    import os
    import sys

    _build = os.environ.get("SPECORR_BUILD_DIR")
    if not _build:
        raise
    sys.path.insert(0, _build)
    from _specorr import *  # noqa: F401,F403
