"""In-memory session state: named colormaps plus a bounded bundle cache.

All math is reproducible from requests and stored specs; the cache only
avoids recomputation. Editing or deleting a spec drops every bundle that
was computed from it.
"""

from __future__ import annotations

import hashlib
import json
import re
import threading
from collections import OrderedDict
from pathlib import Path

from ..colormap import ColormapSpec, parse_spec, serialize_spec
from ..evaluation import EvaluationBundle

_NAME_RE = re.compile(r"^[A-Za-z0-9._-]+$")


class UnknownNameError(KeyError):
    pass


class DuplicateNameError(ValueError):
    pass


class BadNameError(ValueError):
    pass


class SessionStore:
    def __init__(self, specs_dir: str | None = None, max_bundles: int = 32):
        self._lock = threading.Lock()
        self._colormaps: dict[str, ColormapSpec] = {}
        self._bundles: OrderedDict[str, tuple[str, EvaluationBundle]] = OrderedDict()
        self._cache: dict[tuple, str] = {}
        self._max_bundles = max_bundles
        self._specs_dir = Path(specs_dir) if specs_dir else None
        if self._specs_dir:
            self._specs_dir.mkdir(parents=True, exist_ok=True)
            for path in sorted(self._specs_dir.glob("*.json")):
                self._colormaps[path.stem] = parse_spec(path.read_bytes())

    @staticmethod
    def _check_name(name: str) -> str:
        if not _NAME_RE.match(name):
            raise BadNameError(
                f"colormap name {name!r} must use only letters, digits, '.', '_', '-'"
            )
        return name

    # -- colormap CRUD ------------------------------------------------------

    def names(self) -> list[str]:
        with self._lock:
            return sorted(self._colormaps)

    def get(self, name: str) -> ColormapSpec:
        with self._lock:
            try:
                return self._colormaps[name]
            except KeyError:
                raise UnknownNameError(name) from None

    def create(self, name: str, spec: ColormapSpec) -> None:
        self._check_name(name)
        with self._lock:
            if name in self._colormaps:
                raise DuplicateNameError(name)
            self._set_locked(name, spec)

    def put(self, name: str, spec: ColormapSpec) -> bool:
        """Upsert; returns True when the name already existed."""
        self._check_name(name)
        with self._lock:
            existed = name in self._colormaps
            self._set_locked(name, spec)
            return existed

    def delete(self, name: str) -> None:
        with self._lock:
            if name not in self._colormaps:
                raise UnknownNameError(name)
            del self._colormaps[name]
            self._drop_bundles_locked(name)
            if self._specs_dir:
                (self._specs_dir / f"{name}.json").unlink(missing_ok=True)

    def _set_locked(self, name: str, spec: ColormapSpec) -> None:
        self._colormaps[name] = spec
        # Any cached evaluation of the old spec is now stale.
        self._drop_bundles_locked(name)
        if self._specs_dir:
            (self._specs_dir / f"{name}.json").write_bytes(serialize_spec(spec))

    def _drop_bundles_locked(self, name: str) -> None:
        stale = [bid for bid, (owner, _) in self._bundles.items() if owner == name]
        for bid in stale:
            del self._bundles[bid]
        self._cache = {key: bid for key, bid in self._cache.items() if key[0] != name}

    def spec_sha256(self, name: str) -> str:
        return hashlib.sha256(serialize_spec(self.get(name))).hexdigest()

    # -- bundles -------------------------------------------------------------

    def bundle_key(self, name: str, request_doc: dict) -> tuple:
        return (name, self.spec_sha256(name), json.dumps(request_doc, sort_keys=True))

    def cached_bundle_id(self, key: tuple) -> str | None:
        with self._lock:
            bid = self._cache.get(key)
            if bid is not None and bid in self._bundles:
                self._bundles.move_to_end(bid)
                return bid
            return None

    def store_bundle(self, key: tuple, bundle: EvaluationBundle) -> str:
        bid = hashlib.sha256(repr(key).encode()).hexdigest()[:16]
        with self._lock:
            self._bundles[bid] = (key[0], bundle)
            self._bundles.move_to_end(bid)
            self._cache[key] = bid
            while len(self._bundles) > self._max_bundles:
                old_bid, _ = self._bundles.popitem(last=False)
                self._cache = {k: v for k, v in self._cache.items() if v != old_bid}
        return bid

    def bundle(self, bundle_id: str) -> EvaluationBundle:
        with self._lock:
            try:
                return self._bundles[bundle_id][1]
            except KeyError:
                raise UnknownNameError(bundle_id) from None
