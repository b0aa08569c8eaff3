"""Deterministic fork-based parallel map.

Results are collected by index, so the output is identical to the serial
``[fn(x) for x in items]`` regardless of the worker count; mpmath values
pickle losslessly.  Fork (rather than a Pool) is used so that closures over
high-precision state can be shipped to workers without pickling the function.
"""

from __future__ import annotations

import os
import pickle
import struct


def _write_msg(fd, obj):
    payload = pickle.dumps(obj, protocol=pickle.HIGHEST_PROTOCOL)
    os.write(fd, struct.pack("<Q", len(payload)))
    off = 0
    while off < len(payload):
        off += os.write(fd, payload[off:off + (1 << 20)])


def _read_msg(fh):
    header = fh.read(8)
    if len(header) < 8:
        raise EOFError("worker pipe closed early")
    (length,) = struct.unpack("<Q", header)
    payload = fh.read(length)
    if len(payload) < length:
        raise EOFError("worker pipe truncated")
    return pickle.loads(payload)


def pmap(fn, items, workers: int):
    """Ordered parallel map over ``items`` with ``workers`` forked processes."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    workers = min(workers, len(items))
    pipes = []
    pids = []
    for w in range(workers):
        r, wfd = os.pipe()
        pid = os.fork()
        if pid == 0:  # child
            os.close(r)
            try:
                out = [(i, fn(items[i])) for i in range(w, len(items), workers)]
                _write_msg(wfd, ("ok", out))
            except BaseException as exc:  # noqa: BLE001 - forwarded to parent
                try:
                    _write_msg(wfd, ("err", repr(exc)))
                except Exception:
                    pass
            finally:
                os.close(wfd)
                os._exit(0)
        os.close(wfd)
        pipes.append(os.fdopen(r, "rb"))
        pids.append(pid)
    results: list = [None] * len(items)
    failure = None
    for fh in pipes:
        try:
            status, payload = _read_msg(fh)
        except EOFError as exc:
            failure = failure or RuntimeError(str(exc))
            continue
        finally:
            fh.close()
        if status == "ok":
            for i, val in payload:
                results[i] = val
        else:
            failure = failure or RuntimeError("worker failed: %s" % payload)
    for pid in pids:
        os.waitpid(pid, 0)
    if failure is not None:
        raise failure
    return results
