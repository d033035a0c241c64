"""
Run manifests for SpanTag
Records the command, configuration, seed and input digests next to every
output so a run can be replayed
"""

import datetime
import json
import logging
import os
import sys
from dataclasses import asdict

# Add the project root to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from src.errors import DataError
from utils.file_utils import file_digest, read_text, write_atomic

logger = logging.getLogger(__name__)

MANIFEST_SUFFIX = ".manifest.json"
MANIFEST_VERSION = 1


def manifest_path(output_path):
    return output_path + MANIFEST_SUFFIX


def build_manifest(command, argv, pipeline_config, inputs, output_path):
    """
    Describe a finished run.

    Args:
        command (str): Subcommand name
        argv (list): Full argument list of the run
        pipeline_config (PipelineConfig): Effective configuration
        inputs (dict): role -> path of every file or directory read
        output_path (str): The output the manifest belongs to

    Returns:
        dict: JSON-ready manifest
    """
    return {
        "manifest_version": MANIFEST_VERSION,
        "command": command,
        "argv": list(argv),
        "seed": pipeline_config.seed,
        "config": asdict(pipeline_config),
        "inputs": {
            role: {"path": path, "sha256": file_digest(path)}
            for role, path in sorted(inputs.items()) if path is not None
        },
        "output": {"path": output_path, "sha256": file_digest(output_path)},
        "created_at": datetime.datetime.now().strftime("%Y-%m-%d %H:%M:%S"),
    }


def write_manifest(manifest):
    """
    Save a manifest next to its output.

    Returns:
        str: Path of the manifest file
    """
    path = manifest_path(manifest["output"]["path"])
    write_atomic(path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    logger.info("Wrote manifest %s", path)
    return path


def load_manifest(path):
    """
    Read a manifest written by write_manifest.

    Args:
        path (str): Manifest file

    Returns:
        dict: The manifest
    """
    if not os.path.isfile(path):
        raise DataError("manifest not found", path=path)
    try:
        manifest = json.loads(read_text(path))
    except json.JSONDecodeError as e:
        raise DataError(f"manifest is not valid JSON: {e.msg}", path=path, line=e.lineno) from None

    for key in ("argv", "command", "seed", "inputs", "output"):
        if key not in manifest:
            raise DataError(f"manifest lacks {key!r}", path=path)
    if manifest.get("manifest_version") != MANIFEST_VERSION:
        raise DataError(f"unsupported manifest version {manifest.get('manifest_version')}", path=path)
    return manifest


def changed_inputs(manifest):
    """
    Inputs whose current digest differs from the recorded one.

    Returns:
        list: role names of missing or modified inputs
    """
    changed = []
    for role, entry in manifest["inputs"].items():
        path = entry["path"]
        if not os.path.exists(path) or file_digest(path) != entry["sha256"]:
            changed.append(role)
    return changed
