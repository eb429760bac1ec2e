"""One line per acceptance criterion, collected across the session."""

LINES: list[str] = []


def record(criterion: int | str, name: str, ok: bool, detail: str) -> bool:
    line = f"{'PASS' if ok else 'FAIL'}  [{criterion}] {name}: {detail}"
    LINES.append(line)
    print(line)
    return ok
