import json
import random
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest
import requests

from webrely.errors import TargetDown
from webrely.harness import (
    CampaignConfig,
    Credentials,
    HarnessConfig,
    MockTarget,
    SeededFault,
    analyze_logs,
    crawl_site,
    default_profiles,
    generate_test_cases,
    parse_log_file,
    predict_density,
    predict_faults,
    run_campaign,
    run_evaluation,
)

AUTH = {
    "public": None,
    "professor": Credentials("prof", "prof123"),
    "student": Credentials("stud", "stud123"),
}

FAST = HarnessConfig(duration_s=60.0, arrival_mean_s=0.001, workers=50)

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="module")
def clean_model():
    with MockTarget() as target:
        return crawl_site(target.base_url, AUTH)


def _evaluate(target, model, count, seed, faults=None, cfg=FAST):
    cases = generate_test_cases(model, default_profiles(), count, seed=seed)
    return cases, run_evaluation(
        target.base_url, cases, default_profiles(), cfg, target.log_dir, seed
    )


class _Target(MockTarget):
    """MockTarget plus a scratch log directory for each evaluation."""

    def __init__(self, tmp_path, faults=None):
        super().__init__(faults)
        self.log_dir = tmp_path / "logs"


def test_clean_target_all_ok(tmp_path, clean_model):
    with _Target(tmp_path) as target:
        _, paths = _evaluate(target, clean_model, 30, seed=1)
        log = analyze_logs(paths)
    assert log.defect_density == 0
    assert log.nav_errors == 0
    assert log.mttf_ms is None
    assert log.steps_ok > 0


def test_three_seeded_faults_three_signatures(tmp_path, clean_model):
    faults = [
        SeededFault("/professor/courses", "insert", "http-500"),
        SeededFault("/student/profile", "update", "error-marker"),
        SeededFault("/courses", "read", "missing-marker"),
    ]
    with _Target(tmp_path, faults) as target:
        cases, paths = _evaluate(target, clean_model, 60, seed=42)
        log = analyze_logs(paths)
        predicted = predict_faults(cases, target.fault_table)
    # the case set covers all three seeded pairs and nothing else faults
    assert set(log.fault_signatures) == set(predicted)
    assert len(log.fault_signatures) == 3
    assert log.fault_signatures == predicted


def test_missing_node_is_nav_error_not_abort(tmp_path, clean_model):
    # point one generated step at a path the target does not serve
    from webrely.harness import Step, TestCase

    cases = generate_test_cases(clean_model, default_profiles(), 3, seed=2)
    broken = TestCase(
        id="case-broken",
        view="public",
        seed=2,
        steps=(Step("/", "read", {}), Step("/ghost", "read", {}), Step("/about", "read", {})),
    )
    with _Target(tmp_path) as target:
        paths = run_evaluation(
            target.base_url, cases + [broken], default_profiles(), FAST, target.log_dir, 2
        )
        log = analyze_logs(paths)
    assert log.nav_errors == 1
    assert log.defect_density == 0
    # the tester carried on after the bad node
    records, _ = parse_log_file(sorted(paths)[-1])
    walked = [r.node for r in records if r.step_index >= 0]
    assert walked == ["/", "/ghost", "/about"]


def test_log_isolation_and_order_independence(tmp_path, clean_model):
    with _Target(tmp_path) as target:
        _, paths = _evaluate(target, clean_model, 25, seed=9)
    assert len(set(paths)) == len(paths)
    for path in paths:
        records, _ = parse_log_file(path)
        assert len({r.tester_id for r in records}) == 1
    shuffled = list(paths)
    random.Random(0).shuffle(shuffled)
    assert analyze_logs(shuffled).to_dict() == analyze_logs(paths).to_dict()


def test_profile_safety_post_hoc(tmp_path, clean_model):
    profiles = default_profiles()
    with _Target(tmp_path) as target:
        cases, paths = _evaluate(target, clean_model, 40, seed=12)
    view_of = {c.id: c.view for c in cases}
    checked = 0
    for path in paths:
        records, _ = parse_log_file(path)
        for rec in records:
            if rec.step_index < 0:
                continue
            assert rec.action in profiles[view_of[rec.test_case_id]].permitted()
            checked += 1
    assert checked > 0


def test_summary_deterministic_across_reruns(tmp_path, clean_model):
    faults = [SeededFault("/about", "read", "http-500")]
    summaries = []
    for attempt in range(2):
        with _Target(tmp_path / str(attempt), faults) as target:
            target.log_dir = tmp_path / str(attempt)
            _, paths = _evaluate(target, clean_model, 30, seed=77)
            summaries.append(json.dumps(analyze_logs(paths).summary_dict(), sort_keys=True))
    assert summaries[0] == summaries[1]


def test_analyzer_golden_summary():
    log = analyze_logs([DATA / "activity-0.log", DATA / "activity-1.log"])
    golden = json.loads((DATA / "golden_error_log.json").read_text())
    assert log.to_dict() == golden


def test_mttf_arithmetic_from_synthetic_logs(tmp_path):
    # one tester active 400 s with 8 faults -> MTTF 50 s
    lines = ["0\t0\tcase-x\t-1\tbegin\tok\t-"]
    for i in range(8):
        lines.append(f"{(i + 1) * 1000}\t0\tcase-x\t{i}\tread\tfault:http-500\t/a")
    lines.append("400000\t0\tcase-x\t-1\tend\tok\t-")
    path = tmp_path / "t.log"
    path.write_text("\n".join(lines) + "\n")
    log = analyze_logs([path])
    assert log.total_active_ms == 400_000
    assert log.defect_density == 8
    assert log.mttf_ms == 50_000
    assert log.mttf_ms * log.defect_density == log.total_active_ms


def test_malformed_lines_skipped_and_noted(tmp_path):
    path = tmp_path / "bad.log"
    path.write_text(
        "0\t0\tcase\t-1\tbegin\tok\t-\n"
        "not a record\n"
        "xx\t0\tcase\t0\tread\tok\t/\n"
        "5\t0\tcase\t0\tread\tok\t/\n"
    )
    log = analyze_logs([path])
    assert log.steps_ok == 1
    assert len(log.skipped_lines) == 2


def test_oracle_equivalence_on_covered_faults(tmp_path, clean_model):
    faults = [
        SeededFault("/courses", "read", "error-marker"),
        SeededFault("/professor", "read", "http-500"),
        SeededFault("/student/profile", "delete", "missing-marker"),
    ]
    with _Target(tmp_path, faults) as target:
        cases, paths = _evaluate(target, clean_model, 50, seed=21)
        log = analyze_logs(paths)
        assert log.defect_density == predict_density(cases, target.fault_table)
        assert log.fault_signatures == predict_faults(cases, target.fault_table)


def test_added_fault_never_lowers_density(tmp_path, clean_model):
    base_faults = [SeededFault("/courses", "read", "http-500")]
    more_faults = base_faults + [SeededFault("/student/courses", "insert", "error-marker")]
    densities = []
    for i, faults in enumerate((base_faults, more_faults)):
        with _Target(tmp_path / str(i), faults) as target:
            target.log_dir = tmp_path / f"logs{i}"
            cases, paths = _evaluate(target, clean_model, 40, seed=33)
            densities.append(analyze_logs(paths).defect_density)
    assert densities[1] >= densities[0] > 0


def test_target_down_raises(tmp_path, clean_model):
    cases = generate_test_cases(clean_model, default_profiles(), 3, seed=1)
    with pytest.raises(TargetDown):
        run_evaluation(
            "http://127.0.0.1:9", cases, default_profiles(), FAST, tmp_path, seed=1
        )


class _GateProxy:
    """Forwarding HTTP proxy that can simulate a target outage by closing
    connections without answering."""

    def __init__(self, upstream: str):
        self.up = True
        proxy = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *a):
                pass

            def handle(self):
                if not proxy.up:
                    self.connection.close()
                    return
                super().handle()

            def _forward(self, method):
                length = int(self.headers.get("Content-Length", "0"))
                body = self.rfile.read(length) if length else None
                r = requests.request(
                    method, upstream + self.path, data=body,
                    headers={"Cookie": self.headers.get("Cookie", ""),
                             "Content-Type": self.headers.get("Content-Type", "")},
                    allow_redirects=False, timeout=10,
                )
                self.send_response(r.status_code)
                for key in ("Content-Type", "Location", "Set-Cookie"):
                    if key in r.headers:
                        self.send_header(key, r.headers[key])
                self.send_header("Content-Length", str(len(r.content)))
                self.end_headers()
                self.wfile.write(r.content)

            def do_GET(self):
                self._forward("GET")

            def do_POST(self):
                self._forward("POST")

        self._server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()

    @property
    def url(self):
        host, port = self._server.server_address[:2]
        return f"http://{host}:{port}"

    def stop(self):
        self._server.shutdown()
        self._server.server_close()


def test_campaign_records_aborted_rounds_as_discards(tmp_path, clean_model):
    outage_rounds = {2, 5, 9}
    with MockTarget() as target:
        proxy = _GateProxy(target.base_url)
        try:
            cfg = CampaignConfig(
                evaluations=13, cases_per_round=3, walk_length=3, seed=8,
                harness=HarnessConfig(duration_s=30.0, arrival_mean_s=0.001, workers=8),
            )
            samples = run_campaign(
                proxy.url, clean_model, cfg, tmp_path,
                round_callback=lambda i: setattr(proxy, "up", i not in outage_rounds),
            )
        finally:
            proxy.stop()
    assert samples.n == 10
    assert len(samples.discarded) == 3
    assert all("aborted" in d.reason for d in samples.discarded)


def test_campaign_clean_rounds_all_zero(tmp_path, clean_model):
    with MockTarget() as target:
        cfg = CampaignConfig(
            evaluations=6, cases_per_round=4, walk_length=3, seed=3,
            harness=HarnessConfig(duration_s=30.0, arrival_mean_s=0.001, workers=8),
        )
        samples = run_campaign(target.base_url, clean_model, cfg, tmp_path)
    assert samples.values == (0.0,) * 6
    assert samples.source_label == "real"


def test_campaign_density_matches_offline_replay(tmp_path, clean_model):
    faults = [
        SeededFault("/courses", "read", "http-500"),
        SeededFault("/professor/students", "update", "error-marker"),
    ]
    with MockTarget(faults) as target:
        cfg = CampaignConfig(
            evaluations=5, cases_per_round=12, walk_length=5, seed=14,
            harness=HarnessConfig(duration_s=60.0, arrival_mean_s=0.001, workers=16),
        )
        samples = run_campaign(target.base_url, clean_model, cfg, tmp_path)
        expected = []
        for index in range(cfg.evaluations):
            round_seed = cfg.seed * 1_000_003 + index
            cases = generate_test_cases(
                clean_model, cfg.profiles, cfg.cases_per_round, round_seed, cfg.walk_length
            )
            expected.append(float(predict_density(cases, target.fault_table)))
    assert list(samples.values) == expected
