"""Collects one PASS/FAIL line per acceptance criterion."""
LINES: list = []


def record(number: int, ok: bool, detail: str, tolerance: str = "exact") -> bool:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} [tolerance: {tolerance}] {detail}"
    LINES.append(line)
    print(line)
    return ok
