"""Walk revision histories and feed file-tree pairs into the mining pipeline."""

from __future__ import annotations

import logging
import subprocess
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from joblib import Parallel, delayed

from .clustering import Cluster, QuickFixMiner
from .extraction import MAX_COMPONENT_EDITS, extract_edits
from .patterns import DEFAULT_ANCHORS, ConcreteEdit, Provenance
from .sexpr import ParseError, parse_ast_text
from .tree import Tree

logger = logging.getLogger(__name__)

AST_SUFFIX = ".ast"


class RepositoryError(OSError):
    """The repository itself cannot be read."""


class ParserAdapter:
    """Translate file contents into a :class:`Tree`.

    Subclasses set ``extensions`` and implement :meth:`parse`, raising
    ``ValueError`` (or ``SyntaxError``) on input they cannot handle.
    """

    extensions: Tuple[str, ...] = ()

    def claims(self, path: str) -> bool:
        return path.endswith(self.extensions)

    def parse(self, text: str) -> Tree:
        raise NotImplementedError


class SexprAdapter(ParserAdapter):
    extensions = (AST_SUFFIX,)

    def parse(self, text: str) -> Tree:
        return parse_ast_text(text)


@dataclass(frozen=True)
class FileChange:
    commit: str
    path: str
    before: Optional[str]
    after: Optional[str]


class RevisionSource:
    """One project's history as consecutive (before, after) file changes."""

    project: str

    def changes(self) -> Iterator[FileChange]:
        raise NotImplementedError


class PairsDirectorySource(RevisionSource):
    """Hermetic layout: ``<root>/<case>/before.ast`` and ``<case>/after.ast``.

    Each case directory is one revision pair; cases are visited in sorted
    name order.  Any ``before.<ext>``/``after.<ext>`` pair is picked up, so
    other adapters work too.  A case with only an ``after`` file is an added
    file and yields nothing; one with only ``before`` is skipped by
    :func:`walk`.
    """

    def __init__(self, root, project: Optional[str] = None):
        self.root = Path(root)
        self.project = project or self.root.resolve().name

    def changes(self) -> Iterator[FileChange]:
        if not self.root.is_dir():
            raise RepositoryError(f"not a directory: {self.root}")
        try:
            cases = sorted(p for p in self.root.iterdir() if p.is_dir())
        except OSError as exc:
            raise RepositoryError(str(exc)) from exc
        for case in cases:
            for before in sorted(case.glob("before.*")):
                after = case / ("after" + before.suffix)
                yield FileChange(
                    commit=case.name,
                    path=f"{case.name}/file{before.suffix}",
                    before=before.read_text(encoding="utf-8"),
                    after=after.read_text(encoding="utf-8") if after.is_file() else None,
                )


class GitSource(RevisionSource):
    """A git working copy, walked oldest to newest along first parents.

    Each commit is compared with its first parent; merge commits therefore
    contribute only their first-parent diff.  Renames are not followed.
    """

    def __init__(self, root, project: Optional[str] = None, rev: str = "HEAD",
                 suffixes: Sequence[str] = (AST_SUFFIX,)):
        self.root = Path(root)
        self.project = project or self.root.resolve().name
        self.rev = rev
        self.suffixes = tuple(suffixes)

    def _git(self, *args) -> str:
        try:
            res = subprocess.run(["git", "-C", str(self.root), *args], check=True,
                                 capture_output=True)
        except (OSError, subprocess.CalledProcessError) as exc:
            raise RepositoryError(f"git {' '.join(args)} failed in {self.root}: {exc}") from exc
        return res.stdout.decode("utf-8", errors="replace")

    def _show(self, commit, path) -> str:
        return self._git("show", f"{commit}:{path}")

    def changes(self) -> Iterator[FileChange]:
        if not (self.root / ".git").exists():
            raise RepositoryError(f"not a git repository: {self.root}")
        log = self._git("rev-list", "--first-parent", "--reverse", "--parents", self.rev)
        for line in log.splitlines():
            ids = line.split()
            if len(ids) < 2:
                continue  # root commit has nothing to compare against
            commit, parent = ids[0], ids[1]
            out = self._git("diff-tree", "-r", "--no-renames", "--name-status", "-z", parent, commit)
            fields = out.split("\0")
            for status, path in zip(fields[0::2], fields[1::2]):
                if not path.endswith(self.suffixes):
                    continue
                if status != "M":
                    continue  # added / deleted: no counterpart
                yield FileChange(commit, path, self._show(parent, path), self._show(commit, path))


def open_source(path, suffixes: Sequence[str] = (AST_SUFFIX,)) -> RevisionSource:
    p = Path(path)
    if (p / ".git").exists():
        return GitSource(p, suffixes=suffixes)
    if p.is_dir():
        return PairsDirectorySource(p)
    raise RepositoryError(f"no such repository: {path}")


@dataclass(frozen=True)
class WalkRecord:
    project: str
    commit: str
    path: str
    before: Tree
    after: Tree

    @property
    def provenance(self) -> Provenance:
        return Provenance(self.project, self.commit, self.path)


def _pick_adapter(adapters, path) -> Optional[ParserAdapter]:
    for a in adapters:
        if a.claims(path):
            return a
    return None


def walk(source: RevisionSource, adapters: Sequence[ParserAdapter] = (SexprAdapter(),)) -> Iterator[WalkRecord]:
    """Yield one record per modified, parseable file in each revision pair."""
    for ch in source.changes():
        if ch.before is None or ch.after is None:
            continue
        adapter = _pick_adapter(adapters, ch.path)
        if adapter is None:
            continue
        try:
            before = adapter.parse(ch.before)
            after = adapter.parse(ch.after)
        except (ParseError, ValueError, SyntaxError) as exc:
            logger.warning("skipping %s@%s:%s: %s", source.project, ch.commit, ch.path, exc)
            continue
        yield WalkRecord(source.project, ch.commit, ch.path, before, after)


@dataclass
class MiningConfig:
    dcap_depth: int = 1
    max_component_edits: Optional[int] = MAX_COMPONENT_EDITS
    anchors: Tuple[Tuple[str, str], ...] = DEFAULT_ANCHORS
    workers: Optional[int] = None
    adapters: Sequence[ParserAdapter] = field(default_factory=lambda: (SexprAdapter(),))


def _extract(record: WalkRecord, max_component_edits) -> List[ConcreteEdit]:
    return extract_edits(record.before, record.after, record.provenance, max_component_edits)


def extract_all(sources: Iterable[RevisionSource], config: MiningConfig) -> List[ConcreteEdit]:
    """Concrete edits of all sources, in repository order."""
    records = [r for s in sources for r in walk(s, config.adapters)]
    if config.workers in (None, 1):
        per_record = [_extract(r, config.max_component_edits) for r in records]
    else:
        # joblib returns results in submission order
        per_record = Parallel(n_jobs=config.workers)(
            delayed(_extract)(r, config.max_component_edits) for r in records)
    return [e for edits in per_record for e in edits]


def mine(sources, config: Optional[MiningConfig] = None) -> List[Cluster]:
    """walk -> diff -> components -> lift -> cluster, over one or more sources."""
    config = config or MiningConfig()
    if isinstance(sources, RevisionSource):
        sources = [sources]
    edits = extract_all(sources, config)
    if not edits:
        return []
    miner = QuickFixMiner(dcap_depth=config.dcap_depth, anchors=config.anchors,
                          n_jobs=config.workers).fit(edits)
    return miner.clusters_
