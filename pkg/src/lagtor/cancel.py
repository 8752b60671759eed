"""Cooperative cancellation for long-running constructions."""
import threading

from .errors import Cancelled


class CancelToken:
    def __init__(self):
        self._event = threading.Event()

    def cancel(self):
        self._event.set()

    @property
    def cancelled(self) -> bool:
        return self._event.is_set()

    def check(self):
        if self._event.is_set():
            raise Cancelled("operation cancelled")


def check(token):
    if token is not None:
        token.check()
