"""Run recursive proof transformations on a thread with a large stack.

Translated proofs can be thousands of rules tall, which is deeper than the
default interpreter recursion limit allows.
"""

from __future__ import annotations

import sys
import threading
from typing import Callable, TypeVar

T = TypeVar("T")

STACK_BYTES = 512 * 1024 * 1024
RECURSION_LIMIT = 200_000

_local = threading.local()


def call_with_deep_stack(fn: Callable[..., T], *args, **kwargs) -> T:
    if getattr(_local, "inside", False):
        return fn(*args, **kwargs)
    result: list = []
    error: list = []

    def run() -> None:
        _local.inside = True
        try:
            result.append(fn(*args, **kwargs))
        except BaseException as e:  # re-raised in the caller's thread
            error.append(e)

    old_size = threading.stack_size()
    old_limit = sys.getrecursionlimit()
    threading.stack_size(STACK_BYTES)
    sys.setrecursionlimit(max(old_limit, RECURSION_LIMIT))
    try:
        t = threading.Thread(target=run)
        t.start()
        t.join()
    finally:
        threading.stack_size(old_size)
        sys.setrecursionlimit(old_limit)
    if error:
        raise error[0]
    return result[0]
