import subprocess

import pytest

from editmine.sexpr import serialize_ast_text


def _git(root, *args):
    subprocess.run(["git", "-C", str(root), *args], check=True, capture_output=True)


@pytest.fixture
def git_repo(tmp_path):
    """Factory: build a repository from a list of commits ``{path: tree or None}``."""
    def make(name, commits):
        root = tmp_path / name
        root.mkdir()
        _git(root, "init", "-q")
        _git(root, "config", "user.email", "dev@example.com")
        _git(root, "config", "user.name", "dev")
        for n, files in enumerate(commits):
            for path, tree in files.items():
                f = root / path
                if tree is None:
                    f.unlink()
                    continue
                f.parent.mkdir(parents=True, exist_ok=True)
                f.write_text(tree if isinstance(tree, str) else serialize_ast_text(tree) + "\n")
            _git(root, "add", "-A")
            _git(root, "commit", "-q", "--allow-empty", "-m", f"c{n}")
        return root
    return make


# one line per acceptance criterion, shown in the terminal summary
CRITERIA = []


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA:
            terminalreporter.write_line(line)
