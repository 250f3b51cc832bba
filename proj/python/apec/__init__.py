"""Cut-and-project model sets, Delone metrics and amorphic complexity estimates."""

import json

from ._apec import *  # noqa: F401,F403
from ._apec import ApecError, __version__, run as _run


def run(command, out_dir, preset="", config="", seed=None, threads=1):
    """Run generate, ac or dim and return the parsed summary with files and warnings."""
    result = _run(command, str(out_dir), preset=preset, config=config, seed=seed, threads=threads)
    summary = json.loads(result["summary"])
    summary["files"] = result["files"]
    summary["warnings"] = result["warnings"]
    return summary
