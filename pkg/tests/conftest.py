import warnings

import pytest

from levyasym import catalog

# one representative per catalog family, used by the property suites
MEMBERS = [
    ("stable", dict(alpha=0.5)),
    ("stable", dict(alpha=1.5)),
    ("cauchy", {}),
    ("brownian", {}),
    ("relativistic", dict(alpha=0.5)),
    ("relativistic", dict(alpha=1.0)),
    ("tempered", dict(alpha=0.7)),
    ("truncated", dict(alpha=1.0)),
    ("lamperti", dict(alpha=1.0, delta=0.5)),
    ("layered", dict(alpha=0.5, alpha1=1.5)),
    ("log_exponent", dict(alpha=0.5, beta=0.25, gamma=1.0)),
    ("log_corrected", dict(alpha=1.0, beta=1.0)),
    ("gamma_variance", {}),
]


def member_id(member):
    fam, params = member
    return fam + "".join(f"-{k}{v:g}" for k, v in params.items())


def build(member, dim):
    fam, params = member
    return catalog(fam, dim=dim, **params)


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    def record(number, title, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {title}"
        if detail:
            line += f" | {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed
    return record


def pytest_configure(config):
    warnings.filterwarnings("ignore", message=".*roundoff error.*")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
