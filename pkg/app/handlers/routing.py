from __future__ import annotations

import argparse
from dataclasses import dataclass, field
from typing import Any, Awaitable, Callable, Dict, List, Optional

Handler = Callable[..., Awaitable["CommandResult"]]
Configure = Callable[[argparse.ArgumentParser], None]


class UsageError(ValueError):
    """Bad command-line arguments."""


@dataclass
class CommandResult:
    verdict: Optional[bool]
    payload: Dict[str, Any] = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return 1 if self.verdict is False else 0


@dataclass
class Route:
    name: str
    help: str
    handler: Handler
    configure: Configure


class CommandRouter:
    """Collects verb handlers; each registers its own arguments."""

    def __init__(self) -> None:
        self._routes: Dict[str, Route] = {}

    def command(self, name: str, help: str, configure: Configure) -> Callable[[Handler], Handler]:
        def register(handler: Handler) -> Handler:
            if name in self._routes:
                raise ValueError(f"command {name!r} registered twice")
            self._routes[name] = Route(name, help, handler, configure)
            return handler

        return register

    def routes(self) -> List[Route]:
        return list(self._routes.values())

    def get(self, name: str) -> Route:
        try:
            return self._routes[name]
        except KeyError:
            raise UsageError(f"unknown command {name!r}") from None

    async def dispatch(self, name: str, **dependencies: Any) -> CommandResult:
        return await self.get(name).handler(**dependencies)
