def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance") or __import__("sys").modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for cid in sorted(mod.RESULTS, key=int):
        passed, detail = mod.RESULTS[cid]
        tr.write_line(f"ACCEPTANCE {cid} {'PASS' if passed else 'FAIL'}: {detail}")
    for line in mod.INFO:
        tr.write_line(f"INFO {line}")
