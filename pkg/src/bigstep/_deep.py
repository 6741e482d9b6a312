"""Helpers for deep term trees: a large-stack runner and cached hashing."""
from __future__ import annotations

import sys
import threading

_LIMIT = 200_000
_STACK = 512 * 1024 * 1024


def deep(fn, *args, **kwargs):
    box: list = []

    def target():
        try:
            box.append((True, fn(*args, **kwargs)))
        except BaseException as e:  # re-raised in the caller
            box.append((False, e))

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, _LIMIT))
    old_size = threading.stack_size(_STACK)
    try:
        t = threading.Thread(target=target)
        t.start()
        t.join()
    finally:
        threading.stack_size(old_size)
        sys.setrecursionlimit(old_limit)
    ok, val = box[0]
    if not ok:
        raise val
    return val


def cache_hash(*classes) -> None:
    """Memoize the field hash of frozen dataclasses used as memo keys for deep trees."""
    for cls in classes:
        base = cls.__hash__

        def __hash__(self, _base=base):
            try:
                return self.__dict__["_hash"]
            except KeyError:
                h = _base(self)
                object.__setattr__(self, "_hash", h)
                return h
        cls.__hash__ = __hash__
