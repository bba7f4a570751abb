"""Breadth-first site discovery, one pass per view.

Authenticated views log in first and start from wherever the login
redirects; the public view starts at the crawl root.  Links and form
targets are visited in sorted order and node identities are sorted paths,
so repeated crawls of a static site produce identical models.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from html.parser import HTMLParser
from urllib.parse import urljoin, urlparse

import requests

from ..errors import AuthFailed, Unreachable
from .model import FormSpec, Node, SiteModel, node_id

__all__ = ["Credentials", "CrawlLimits", "crawl_site"]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Credentials:
    username: str
    password: str
    login_path: str = "/login"


@dataclass(frozen=True)
class CrawlLimits:
    max_depth: int = 5
    max_pages_per_view: int = 50

    def __post_init__(self):
        if self.max_depth < 1 or self.max_pages_per_view < 1:
            raise ValueError("crawl limits must be positive")


class _PageScan(HTMLParser):
    """Collects same-site link paths and form specs from one page."""

    def __init__(self, base_path: str):
        super().__init__()
        self.base_path = base_path
        self.links: list[str] = []
        self.forms: list[dict] = []
        self._form: dict | None = None

    @staticmethod
    def _to_path(base_path: str, href: str) -> str | None:
        parsed = urlparse(href)
        if parsed.scheme or parsed.netloc:
            return None  # off-site
        path = urlparse(urljoin(base_path, href)).path or "/"
        return path

    def handle_starttag(self, tag, attrs):
        attrs = dict(attrs)
        if tag == "a" and attrs.get("href"):
            path = self._to_path(self.base_path, attrs["href"])
            if path:
                self.links.append(path)
        elif tag == "form":
            action = self._to_path(self.base_path, attrs.get("action") or self.base_path)
            self._form = {
                "action_path": action or self.base_path,
                "method": (attrs.get("method") or "get").lower(),
                "op": "read",
                "fields": [],
            }
        elif tag == "input" and self._form is not None:
            name = attrs.get("name")
            if not name:
                return
            if name == "op":
                self._form["op"] = attrs.get("value", "read")
            else:
                self._form["fields"].append(name)

    def handle_endtag(self, tag):
        if tag == "form" and self._form is not None:
            self.forms.append(self._form)
            self._form = None


def _login(session: requests.Session, root: str, view: str, creds: Credentials) -> str:
    """POST the login form; returns the entry path the target redirects to."""
    try:
        response = session.post(
            urljoin(root, creds.login_path),
            data={"view": view, "username": creds.username, "password": creds.password},
            allow_redirects=False,
            timeout=10,
        )
    except requests.RequestException as exc:
        raise Unreachable(f"login for view {view!r} failed to connect: {exc}") from exc
    if response.status_code not in (200, 302, 303):
        raise AuthFailed(f"view {view!r}: login rejected with status {response.status_code}")
    entry = response.headers.get("Location")
    if not entry:
        raise AuthFailed(f"view {view!r}: login response carried no redirect target")
    return urlparse(entry).path or "/"


def crawl_site(
    root: str,
    auth: dict[str, Credentials | None],
    limits: CrawlLimits = CrawlLimits(),
) -> SiteModel:
    """Discover nodes, edges and forms for every view in auth.

    auth maps view name to credentials (None for unauthenticated views).
    Raises Unreachable if the root never answers and AuthFailed when a
    login is rejected.  Hitting a limit only flags the model as truncated.
    """
    nodes: dict[str, Node] = {}
    edges: set[tuple[str, str]] = set()
    entry_points: dict[str, str] = {}
    truncated = False

    for view in sorted(auth):
        creds = auth[view]
        session = requests.Session()
        if creds is None:
            entry_path = urlparse(root).path or "/"
        else:
            entry_path = _login(session, root, view, creds)
        entry_points[view] = node_id(view, entry_path)

        seen: set[str] = {entry_path}
        frontier: deque[tuple[str, int]] = deque([(entry_path, 0)])
        pages = 0
        while frontier:
            path, depth = frontier.popleft()
            if pages >= limits.max_pages_per_view:
                truncated = True
                log.info("view %s: page cap %d reached", view, limits.max_pages_per_view)
                break
            pages += 1
            try:
                response = session.get(urljoin(root, path), timeout=10)
            except requests.RequestException as exc:
                if path == entry_path:
                    raise Unreachable(f"crawl root {root} unreachable: {exc}") from exc
                log.warning("view %s: %s unreachable during crawl, skipped", view, path)
                continue
            if response.status_code != 200:
                if path == entry_path:
                    raise Unreachable(
                        f"entry {path} for view {view!r} answered {response.status_code}"
                    )
                log.warning("view %s: %s answered %d", view, path, response.status_code)
                continue

            scan = _PageScan(path)
            scan.feed(response.text)

            ops = sorted({f["op"] for f in scan.forms if f["op"] != "read"})
            forms = tuple(
                FormSpec(f["action_path"], f["method"], f["op"], tuple(f["fields"]))
                for f in scan.forms
            )
            nodes[node_id(view, path)] = Node(
                view=view, path=path, actions=tuple(["read"] + ops), forms=forms
            )

            targets = set(scan.links)
            targets.update(f["action_path"] for f in scan.forms if f["action_path"] != path)
            for target in sorted(targets):
                edges.add((node_id(view, path), node_id(view, target)))
                if target not in seen:
                    if depth + 1 <= limits.max_depth:
                        seen.add(target)
                        frontier.append((target, depth + 1))
                    else:
                        truncated = True

    # drop edges pointing at pages that were never fetched (cap or depth cut)
    edges = {(s, d) for s, d in edges if s in nodes and d in nodes}
    return SiteModel(
        nodes=nodes, edges=frozenset(edges), entry_points=entry_points, truncated=truncated
    )
