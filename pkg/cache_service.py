#!/usr/bin/env python3
"""
Result cache for computed invariants.
One JSON file per (braid, invariant, method) under LG_CACHE_DIR, named by a
sha256 content hash that also covers the engine version.
"""

import hashlib
import json
import logging
import os
import shutil
from typing import Dict, Optional

from laurent import LaurentPoly

logger = logging.getLogger(__name__)

ENGINE_VERSION = "lg-engine-1"


class ResultCacheService:
    def __init__(self, cache_dir: Optional[str] = None):
        self.cache_dir = cache_dir or os.getenv("LG_CACHE_DIR", ".lg_cache")
        self.hits = 0
        self.misses = 0
        os.makedirs(self.cache_dir, exist_ok=True)

    @staticmethod
    def key(braid_text: str, invariant: str, method: str) -> str:
        payload = json.dumps([braid_text, invariant, method, ENGINE_VERSION])
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def _path(self, key: str) -> str:
        return os.path.join(self.cache_dir, f"{key}.json")

    def get(self, braid_text: str, invariant: str, method: str) -> Optional[LaurentPoly]:
        path = self._path(self.key(braid_text, invariant, method))
        if not os.path.exists(path):
            self.misses += 1
            return None
        try:
            with open(path, "r", encoding="utf-8") as handle:
                entry = json.load(handle)
            value = LaurentPoly.from_json(entry["poly"])
        except (OSError, ValueError, KeyError) as e:
            logger.warning(f"⚠️ Ignoring unreadable cache entry {path}: {e}")
            self.misses += 1
            return None
        self.hits += 1
        return value

    def put(self, braid_text: str, invariant: str, method: str, value: LaurentPoly) -> str:
        key = self.key(braid_text, invariant, method)
        entry: Dict = {
            "braid": braid_text,
            "invariant": invariant,
            "method": method,
            "engine": ENGINE_VERSION,
            "poly": value.to_json(),
        }
        path = self._path(key)
        tmp = f"{path}.tmp"
        with open(tmp, "w", encoding="utf-8") as handle:
            json.dump(entry, handle, sort_keys=True)
        os.replace(tmp, path)
        return key

    def get_or_compute(self, braid_text: str, invariant: str, method: str, compute,
                       force: bool = False) -> LaurentPoly:
        if not force:
            cached = self.get(braid_text, invariant, method)
            if cached is not None:
                return cached
        value = compute()
        self.put(braid_text, invariant, method, value)
        return value

    def clear(self) -> None:
        shutil.rmtree(self.cache_dir, ignore_errors=True)
        os.makedirs(self.cache_dir, exist_ok=True)
        logger.info(f"🔄 Cleared cache at {self.cache_dir}")


# Global cache service (created on first use)
cache_service = None


def get_cache_service(cache_dir: Optional[str] = None) -> ResultCacheService:
    """Get or create the cache service instance"""
    global cache_service
    if cache_service is None or (cache_dir is not None and cache_service.cache_dir != cache_dir):
        cache_service = ResultCacheService(cache_dir)
    return cache_service
