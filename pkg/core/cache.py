"""
Ball Cache - on-disk store for generated balls
Keys are hashes of (engine version, surface hash, kind, seed, bounds)
"""

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Optional

import config
from core.complexes import BallError, ComplexBall, export_ball, load_ball

logger = logging.getLogger(__name__)


class BallCache:
    """JSON ball documents stored by content key; stale engine versions are ignored."""

    def __init__(self, folder: Optional[Path] = None):
        self.folder = Path(folder) if folder is not None else config.CACHE_FOLDER
        self.folder.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def key(kind: str, surface_hash: str, seed: Any, bounds: Dict[str, Any]) -> str:
        payload = json.dumps({
            "engine_version": config.ENGINE_VERSION,
            "surface": surface_hash,
            "kind": kind,
            "seed": seed.to_dict() if hasattr(seed, "to_dict") else seed,
            "bounds": bounds,
        }, sort_keys=True)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def path(self, key: str) -> Path:
        return self.folder / f"{key}.json"

    def get(self, key: str) -> Optional[ComplexBall]:
        path = self.path(key)
        if not path.exists():
            return None
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
            if data.get("engine_version") != config.ENGINE_VERSION:
                logger.info(f"Ignoring stale cache entry {key[:12]}")
                return None
            return load_ball(data)
        except (OSError, ValueError, BallError) as e:
            logger.error(f"Failed to read cache entry {key[:12]}: {e}")
            return None

    def put(self, key: str, ball: ComplexBall) -> Path:
        """Write through a temporary file so readers never see a partial document."""
        path = self.path(key)
        fd, tmp = tempfile.mkstemp(dir=self.folder, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as f:
                f.write(export_ball(ball, "json"))
            os.replace(tmp, path)
        except OSError as e:
            logger.error(f"Failed to write cache entry {key[:12]}: {e}")
            if os.path.exists(tmp):
                os.remove(tmp)
            raise
        return path
