"""Command-line front end: evaluate, improve, re-evaluate, compare.

Subcommands
    simulate    ideal-conditions campaign -> sample set + fit artifacts
    crawl       build and save the target's site model
    evaluate    live evaluation rounds against an HTTP target
    psp         quality-metric trend report from program records
    fit         fit an existing sample file
    compare     compare two fitted phases, emit overlay curve data
    mock-serve  start the bundled mock target

Every documented error class exits with a fixed code (see EXIT_CODES); 0
means success, 1 is reserved for unexpected failures, 2 for bad usage or
bad config files.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import errors
from .harness import (
    CampaignConfig,
    CrawlLimits,
    HarnessConfig,
    MockTarget,
    SiteModel,
    crawl_site,
    default_profiles,
    load_fault_table,
)
from .harness import run_campaign as run_live_campaign
from .kvconfig import parse_kv, take
from .project import EiProject
from .psp import load_records, trend_report, trend_series_csv
from .simulator import (
    SimConfig,
    run_campaign,
    sim_config_from_kv,
    sim_config_to_dict,
    write_trace_csv,
)
from .stats import AnomalyPolicy, compare_models, weibull_pdf
from .stats.serialize import comparison_to_dict, load_samples_csv, load_samples_text

EXIT_CODES: dict[type, int] = {
    errors.EmptySample: 3,
    errors.NonIdentifiable: 4,
    errors.NoConvergence: 5,
    errors.Unreachable: 6,
    errors.TargetDown: 6,
    errors.AuthFailed: 6,
    errors.MissingPhase: 7,
    errors.RecordParseError: 8,
    errors.MalformedLog: 8,
    errors.AllDiscarded: 9,
    errors.InsufficientData: 10,
    errors.LockHeld: 11,
    errors.InvariantBreach: 12,
    errors.EmptyModel: 13,
}

COMPARE_CURVE_POINTS = 512


def _analysis_from_kv(pairs: dict[str, str]) -> dict:
    return {
        "policy": take(pairs, "policy", str, "tukey"),
        "policy_k": take(pairs, "policy_k", float, 3.0),
        "bin_width": take(pairs, "bin_width", float, 1.0),
        "origin": take(pairs, "origin", float, 0.0),
        "gof_method": take(pairs, "gof_method", str, "chi-square"),
        "significance": take(pairs, "significance", float, 0.05),
    }


def _policy(analysis: dict) -> AnomalyPolicy:
    return AnomalyPolicy(analysis["policy"], analysis["policy_k"])


def _persist(project: EiProject, label: str, samples, config_doc: dict, analysis: dict):
    return project.persist_phase(
        label,
        samples,
        config_doc,
        policy=_policy(analysis),
        bin_width=analysis["bin_width"],
        origin=analysis["origin"],
        gof_method=analysis["gof_method"],
        significance=analysis["significance"],
    )


def _report_fit(result) -> None:
    fit = result.fit
    print(
        f"retained {result.samples.n} values "
        f"({len(result.samples.discarded)} discarded); "
        f"shape {fit.model.shape:.4f} scale {fit.model.scale:.4f} "
        f"via {fit.method} in {fit.iterations} iterations"
    )
    if fit.gof is not None:
        print(
            f"goodness of fit ({fit.gof.method}): statistic {fit.gof.statistic:.3f} "
            f"threshold {fit.gof.threshold:.3f} -> "
            f"{'accepted' if fit.gof.passed else 'REJECTED'}"
        )


# --- subcommands ------------------------------------------------------------


def cmd_simulate(args) -> int:
    project = EiProject(args.project_dir)
    pairs = parse_kv(args.config) if args.config else {}
    cfg = sim_config_from_kv(pairs)
    analysis = _analysis_from_kv(pairs)
    if pairs:
        raise ValueError(f"unknown config keys {sorted(pairs)}")
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    with project.lock():
        samples = run_campaign(cfg, source_label=args.label)
        config_doc = {
            "command": "simulate",
            "label": args.label,
            "sim": sim_config_to_dict(cfg),
            "analysis": analysis,
        }
        result = _persist(project, args.label, samples, config_doc, analysis)
        if args.trace:
            write_trace_csv(cfg, 0, project.phase_dir(args.label) / "trace-run0.csv")
    _report_fit(result)
    print(f"artifacts under {project.phase_dir(args.label)}")
    return 0


def _auth_from_profiles(profiles) -> dict:
    return {view: profile.credentials for view, profile in profiles.items()}


def _crawl_limits(pairs: dict[str, str]) -> CrawlLimits:
    return CrawlLimits(
        max_depth=take(pairs, "max_depth", int, 5),
        max_pages_per_view=take(pairs, "max_pages", int, 50),
    )


def cmd_crawl(args) -> int:
    pairs = parse_kv(args.config) if args.config else {}
    limits = _crawl_limits(pairs)
    if pairs:
        raise ValueError(f"unknown config keys {sorted(pairs)}")
    profiles = default_profiles()
    model = crawl_site(args.target, _auth_from_profiles(profiles), limits)
    out = Path(args.out) if args.out else Path(args.project_dir) / "models" / "site_model.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(model.to_dict(), indent=2, sort_keys=True) + "\n")
    print(f"{len(model.nodes)} nodes, {len(model.edges)} edges -> {out}")
    if model.truncated:
        print("note: crawl limits were hit; the model is truncated")
    return 0


def cmd_evaluate(args) -> int:
    project = EiProject(args.project_dir)
    pairs = parse_kv(args.config) if args.config else {}
    harness = HarnessConfig(
        duration_s=take(pairs, "duration", float, 100.0),
        arrival_mean_s=take(pairs, "arrival_mean", float, 4.0),
        workers=take(pairs, "workers", int, 100),
        request_timeout_s=take(pairs, "request_timeout", float, 10.0),
    )
    campaign = CampaignConfig(
        evaluations=take(pairs, "evaluations", int, 500),
        cases_per_round=take(pairs, "cases", int, 1000),
        walk_length=take(pairs, "walk_length", int, 6),
        seed=take(pairs, "seed", int, 0),
        harness=harness,
    )
    limits = _crawl_limits(pairs)
    analysis = _analysis_from_kv(pairs)
    if pairs:
        raise ValueError(f"unknown config keys {sorted(pairs)}")
    if args.seed is not None:
        campaign = replace(campaign, seed=args.seed)

    with project.lock():
        if args.model:
            model = SiteModel.from_dict(json.loads(Path(args.model).read_text()))
        else:
            model = crawl_site(args.target, _auth_from_profiles(campaign.profiles), limits)
        phase_dir = project.phase_dir(args.label)
        phase_dir.mkdir(parents=True, exist_ok=True)
        (phase_dir / "model.json").write_text(
            json.dumps(model.to_dict(), indent=2, sort_keys=True) + "\n"
        )
        samples = run_live_campaign(
            args.target, model, campaign, phase_dir / "logs", source_label=args.label
        )
        config_doc = {
            "command": "evaluate",
            "label": args.label,
            "target": args.target,
            "campaign": {
                "evaluations": campaign.evaluations,
                "cases_per_round": campaign.cases_per_round,
                "walk_length": campaign.walk_length,
                "seed": campaign.seed,
                "duration_s": harness.duration_s,
                "arrival_mean_s": harness.arrival_mean_s,
                "workers": harness.workers,
            },
            "analysis": analysis,
        }
        result = _persist(project, args.label, samples, config_doc, analysis)
    _report_fit(result)
    print(f"artifacts under {project.phase_dir(args.label)}")
    return 0


def cmd_psp(args) -> int:
    project = EiProject(args.project_dir)
    with project.lock():
        records = load_records(args.records)
        report = trend_report(records)
        directory = project.psp_dir(args.label)
        directory.mkdir(parents=True, exist_ok=True)
        doc = {"command": "psp", "label": args.label, "records": Path(args.records).name}
        doc.update(report.to_dict())
        (directory / "trend.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        for metric in report.series:
            (directory / f"{metric}.csv").write_text(trend_series_csv(report, metric))
    slopes = ", ".join(
        f"{name} {slope:+.4g}" if slope is not None else f"{name} n/a"
        for name, slope in sorted(report.slopes.items())
    )
    print(f"{len(records)} programs; slopes: {slopes}")
    print(f"artifacts under {project.psp_dir(args.label)}")
    return 0


def cmd_fit(args) -> int:
    project = EiProject(args.project_dir)
    pairs = parse_kv(args.config) if args.config else {}
    analysis = _analysis_from_kv(pairs)
    if pairs:
        raise ValueError(f"unknown config keys {sorted(pairs)}")
    if args.column:
        samples = load_samples_csv(args.samples, args.column, args.label)
    else:
        samples = load_samples_text(args.samples, args.label)
    with project.lock():
        config_doc = {
            "command": "fit",
            "label": args.label,
            "samples": str(args.samples),
            "column": args.column,
            "analysis": analysis,
        }
        result = _persist(project, args.label, samples, config_doc, analysis)
    _report_fit(result)
    return 0


def _curves_csv(model_a, model_b) -> str:
    # grid spans to the 99.9th percentile of the wider model
    import math

    hi = max(
        m.scale * math.log(1000.0) ** (1.0 / m.shape) for m in (model_a, model_b)
    )
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", "pdf_a", "pdf_b"])
    step = hi / (COMPARE_CURVE_POINTS - 1)
    for i in range(COMPARE_CURVE_POINTS):
        x = i * step
        writer.writerow([f"{x:.6g}", f"{weibull_pdf(model_a, x):.6g}", f"{weibull_pdf(model_b, x):.6g}"])
    return buf.getvalue()


def cmd_compare(args) -> int:
    project = EiProject(args.project_dir)
    with project.lock():
        fit_a = project.load_fit(args.label_a)
        fit_b = project.load_fit(args.label_b)
        report = compare_models(fit_a.model, fit_b.model)
        directory = project.compare_dir(args.label_a, args.label_b)
        directory.mkdir(parents=True, exist_ok=True)
        doc = comparison_to_dict(report, args.label_a, args.label_b)
        if report.verdict == "equal":
            doc["improvement"] = "equal"
        elif report.verdict == "a more reliable":
            doc["improvement"] = "improved"
        else:
            doc["improvement"] = "worsened"
        (directory / "report.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        (directory / "curves.csv").write_text(_curves_csv(fit_a.model, fit_b.model))
    print(
        f"{args.label_a}: mean {report.mean_a:.4f}  {args.label_b}: mean {report.mean_b:.4f}  "
        f"ratio {report.mean_ratio:.4f}  verdict: {report.verdict} ({doc['improvement']})"
    )
    print(f"artifacts under {directory}")
    return 0


def cmd_mock_serve(args) -> int:
    faults = load_fault_table(args.faults) if args.faults else None
    target = MockTarget(faults, port=args.port)
    target.start()
    # flush so piped callers (tests, scripts) see the URL immediately
    print(f"mock target serving on {target.base_url} (Ctrl-C to stop)", flush=True)
    try:
        while True:
            time.sleep(3600)
    except KeyboardInterrupt:
        pass
    finally:
        target.stop()
    return 0


# --- argument parsing -------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    # the global flags are accepted both before and after the subcommand;
    # SUPPRESS keeps subparser defaults from clobbering values parsed early
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--project-dir", default=argparse.SUPPRESS, help="artifact store root")
    common.add_argument(
        "--seed", type=int, default=argparse.SUPPRESS, help="override the config seed"
    )
    common.add_argument("--config", default=argparse.SUPPRESS, help="key=value config file")

    parser = argparse.ArgumentParser(
        prog="webrely",
        description="Reliability evaluation and improvement toolkit for web applications",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="ideal-conditions evaluation", parents=[common])
    p.add_argument("--label", default="ideal")
    p.add_argument("--trace", action="store_true", help="save an event trace of run 0")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("crawl", help="build the target site model", parents=[common])
    p.add_argument("--target", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_crawl)

    p = sub.add_parser(
        "evaluate", help="live evaluation against an HTTP target", parents=[common]
    )
    p.add_argument("--target", required=True)
    p.add_argument("--label", default="real")
    p.add_argument("--model", default=None, help="reuse a saved site model")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser(
        "psp", help="quality-metric trends from program records", parents=[common]
    )
    p.add_argument("--records", required=True)
    p.add_argument("--label", default="psp")
    p.set_defaults(func=cmd_psp)

    p = sub.add_parser("fit", help="fit an existing sample file", parents=[common])
    p.add_argument("--samples", required=True)
    p.add_argument("--label", required=True)
    p.add_argument("--column", default=None, help="read this CSV column instead of plain text")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("compare", help="compare two fitted phases", parents=[common])
    p.add_argument("label_a")
    p.add_argument("label_b")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("mock-serve", help="serve the bundled mock target", parents=[common])
    p.add_argument("--port", type=int, default=8008)
    p.add_argument("--faults", default=None, help="JSON fault table file")
    p.set_defaults(func=cmd_mock_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args.project_dir = getattr(args, "project_dir", ".")
    args.seed = getattr(args, "seed", None)
    args.config = getattr(args, "config", None)
    try:
        return args.func(args)
    except errors.WebrelyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        for klass, code in EXIT_CODES.items():
            if isinstance(exc, klass):
                return code
        return 1
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
