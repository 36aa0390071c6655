"""On-disk count cache keyed by a content hash, with per-entry checksums.

Readers never lock; writers take an exclusive file lock and publish entries
with an atomic rename, so a reader sees either no entry or a complete one.
"""
from __future__ import annotations

import csv
import hashlib
import json
import os
import tempfile
from pathlib import Path

from filelock import FileLock

from . import ORACLE_VERSION
from .errors import CachePoisoned
from .fqcount import CountVector


def _digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True).encode()).hexdigest()


def count_key(quiver_key: str, potential: str, n, p: int, sector: str, route: str) -> dict:
    return {"quiver": quiver_key, "potential": potential, "n": list(n), "p": p,
            "sector": sector, "route": route, "oracle": ORACLE_VERSION}


class CountCache:
    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.lock = FileLock(str(self.root / ".write.lock"))
        self.hits = 0
        self.misses = 0

    def _path(self, key: dict) -> Path:
        return self.root / f"{_digest(key)}.json"

    def get(self, key: dict):
        path = self._path(key)
        if not path.exists():
            self.misses += 1
            return None
        entry = json.loads(path.read_text())
        payload = {"key": entry["key"], "counts": entry["counts"]}
        if entry.get("checksum") != _digest(payload) or entry["key"] != key:
            raise CachePoisoned(f"checksum mismatch in {path}; delete the entry to recompute")
        self.hits += 1
        return CountVector(key["p"], tuple(entry["counts"]))

    def put(self, key: dict, cv: CountVector):
        payload = {"key": key, "counts": list(cv.counts)}
        entry = dict(payload, checksum=_digest(payload))
        with self.lock:
            fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
            with os.fdopen(fd, "w") as fh:
                json.dump(entry, fh, sort_keys=True)
            os.replace(tmp, self._path(key))

    def fetch(self, key: dict, compute):
        cv = self.get(key)
        if cv is None:
            cv = compute()
            self.put(key, cv)
        return cv

    def export_csv(self, path):
        rows = []
        for f in sorted(self.root.glob("*.json")):
            e = json.loads(f.read_text())
            k = e["key"]
            rows.append([f.stem[:16], k["quiver"], k["potential"], "x".join(map(str, k["n"])),
                         k["p"], k["sector"], k["route"], k["oracle"], " ".join(map(str, e["counts"]))])
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["hash", "quiver", "potential", "n", "p", "sector", "route", "oracle", "counts"])
            w.writerows(rows)
        return len(rows)
