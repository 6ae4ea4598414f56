ACCEPTANCE_LOG = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LOG:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for crit, label, ok, detail, expected_fail in ACCEPTANCE_LOG:
        tag = "PASS" if ok else ("FAIL (known)" if expected_fail else "FAIL")
        tr.write_line("criterion %d  %-12s %-48s %s" % (crit, tag, label, detail))
