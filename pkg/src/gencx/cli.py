"""Command-line driver: parse model documents, dispatch, render reports.

Subcommands map one-to-one onto engine operations: `check` certifies the
spinor data, `cohomology` prints the exact table, `bundle-verify` runs the
curvature test and the product-certificate construction, `kunneth` and
`spectral` run the product comparisons, and `btransform` stresses shear
invariance with seeded random B-fields.  Exit codes: 0 verified, 1
falsified, 2 input error.
"""

import argparse
import random
import sys
import time

from . import bundles, corpus, dolbeault, geometry, reports, spectral
from .parser import ParseError, parse_model
from .scalars import parse_gauss


def _build_argparser():
    top = argparse.ArgumentParser(
        prog="gencx",
        description="exact verification of generalized complex structures"
        " on coframe models",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, files="+"):
        p.add_argument("files", nargs=files, help="model document(s)")
        p.add_argument("--json", action="store_true", help="emit a JSON report")
        p.add_argument("--seed", type=int, default=0, help="seed for generated cases")

    p = sub.add_parser("check", help="purity, integrability, type, annihilator")
    common(p)
    p.add_argument("--point", default=None, help="chart point, e.g. z=1/2+i")

    p = sub.add_parser("cohomology", help="generalized Dolbeault table")
    common(p)

    p = sub.add_parser("bundle-verify", help="curvature type and product certificate")
    common(p)

    p = sub.add_parser("kunneth", help="product table vs factor convolution")
    common(p)
    p.add_argument("--l", type=int, default=1, help="fiber torus rank 2l")

    p = sub.add_parser("spectral", help="filtration pages and E2 comparison")
    common(p)

    p = sub.add_parser("btransform", help="GH invariance under random closed shears")
    common(p)
    p.add_argument("--count", type=int, default=5, help="number of random B-fields")
    return top


def _parse_point(text):
    point = {}
    if not text:
        return point
    for item in text.split(","):
        name, _, value = item.partition("=")
        if not value:
            raise ValueError("point entries look like var=value, got %r" % item)
        point[name.strip()] = parse_gauss(value.strip())
    return point


def _load(path):
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    stem = path.rsplit("/", 1)[-1]
    stem = stem[: -len(".model")] if stem.endswith(".model") else stem
    doc = parse_model(text, name=stem)
    return doc, [{"path": path, "sha256": reports.digest(text)}]


def _require_rho(doc):
    rho = doc.rho()
    if rho is None:
        raise ValueError("document has no [gcs] section")
    return rho


def _cmd_check(doc, inputs, args):
    model = doc.exposed
    point = _parse_point(args.point)
    spec = geometry.GcsSpec(
        model,
        doc.gcs.get("B"),
        doc.gcs.get("omega"),
        doc.gcs.get("Omega"),
    )
    extra = (point,) if point else ()
    rho, purity = geometry.pure_spinor(spec, extra_points=extra)
    witness = geometry.integrability_witness(rho)
    gcs_type = geometry.type_at(rho, point or None)
    ann_point = None if model.invariant else (point or geometry.sample_grid(model)[0])
    ann = geometry.annihilator(rho, point=ann_point)
    verdict = bool(purity.ok and witness.integrable)
    data = {
        "pure": purity.ok,
        "nondegeneracy_mode": purity.mode,
        "d_rho_status": witness.status,
        "type": gcs_type,
        "annihilator_rank": len(ann),
    }
    lines = [
        "pure spinor: %s (%s)" % ("ok" if purity.ok else "no", purity.mode),
        "d rho: %s" % witness.status
        + ("" if witness.u is None or not witness.u else "  u = %s" % witness.u),
        "type: %d" % gcs_type,
        "annihilator rank: %d" % len(ann),
    ]
    return reports.Report("check", inputs, verdict, data, lines)


def _cmd_cohomology(doc, inputs, args):
    model = doc.exposed
    table = dolbeault.gh_cohomology(model, _require_rho(doc))
    data = {"model": model.name, "gh": table.dims, "total": table.total()}
    lines = [reports.dim_table_text(table.dims), "total: %d" % table.total()]
    return reports.Report("cohomology", inputs, True, data, lines)


def _cmd_bundle_verify(doc, inputs, args):
    if doc.l is None:
        raise ValueError("document has no [bundle] section")
    chart = bundles.build_chart_bundle(doc.model, doc.l, doc.beta, name=doc.name + "_chart")
    curv = bundles.curvature_type(chart)
    rho = bundles.construct_rho(chart)
    closed = not rho.d()
    outcome = bundles.local_product_B(chart)
    data = {
        "curvature_is_11": curv.is_11,
        "curvature_offenders": [
            {"theta": j, "component": comp, "form": str(form)}
            for (j, comp, form) in curv.offenders
        ],
        "d_rho_zero": closed,
    }
    lines = [
        "curvature (1,1): %s" % ("yes" if curv.is_11 else "no"),
        "d rho = 0: %s" % ("yes" if closed else "no"),
    ]
    if isinstance(outcome, bundles.ProductCertificate):
        verdict = True
        data["certificate"] = {
            "B_hat": str(outcome.Bhat),
            "eta": str(outcome.eta),
            "eta_prime": str(outcome.eta_prime),
            "gauge": [str(g) for g in outcome.gauge],
        }
        lines.append("product certificate: B_hat = %s" % outcome.Bhat)
    else:
        verdict = False
        data["obstruction"] = {
            "reason": outcome.reason,
            "residuals": {str(j): str(f) for j, f in outcome.residuals.items()},
        }
        lines.append("no product certificate: %s" % outcome.reason)
        for j, f in sorted(outcome.residuals.items()):
            lines.append("  theta_%s residual %s" % (j, f))
    return reports.Report("bundle-verify", inputs, verdict, data, lines)


def _cmd_kunneth(doc, inputs, args):
    rep = spectral.kunneth_check(doc.exposed, args.l)
    data = {
        "ok": rep.ok,
        "l": args.l,
        "product": rep.product,
        "convolution": rep.convolution,
        "base": rep.base,
        "fiber": rep.fiber,
    }
    lines = [
        "product table:     %s" % _dims_line(rep.product),
        "factor convolution: %s" % _dims_line(rep.convolution),
        "degree-wise equal: %s" % ("yes" if rep.ok else "no"),
    ]
    return reports.Report("kunneth", inputs, bool(rep.ok), data, lines)


def _cmd_spectral(doc, inputs, args):
    if doc.bundle is None:
        raise ValueError("document has no [bundle] section")
    if doc.bundle.presentation != "invariant":
        raise ValueError("spectral runs on the invariant presentation")
    rho = doc.rho() or bundles.construct_rho(doc.bundle)
    fc = spectral.build_filtration(doc.bundle.total, rho, spectral.fiber_null_space(doc.bundle))
    rep = spectral.pages(fc)
    flat = not any(bool(ch) for ch in doc.bundle.curvature)
    data = {
        "pages": {r: {"%d,%d" % pq: v for pq, v in cells.items() if v} for r, cells in rep.pages.items()},
        "stabilization_index": rep.stabilization_index,
        "e_infinity": {"%d,%d" % pq: v for pq, v in rep.e_infinity.items() if v},
        "total_cohomology": rep.total_cohomology,
        "flat": flat,
    }
    lines = []
    for r in sorted(rep.pages):
        lines.append("E_%d (total %d)" % (r, rep.page_total(r)))
        lines.append(rep.grid(r))
    lines.append("stabilizes at r = %d" % rep.stabilization_index)
    verdict = True
    if flat:
        e2 = spectral.e2_identification(doc.bundle)
        agree = e2 == rep.pages.get(2, {})
        data["e2_identification"] = {"%d,%d" % pq: v for pq, v in e2.items() if v}
        data["e2_matches_pages"] = agree
        lines.append("E_2 identification from factor tables: %s" % ("agrees" if agree else "DISAGREES"))
        verdict = agree
    else:
        lines.append("bundle is not flat: E_2 identification skipped")
    return reports.Report("spectral", inputs, verdict, data, lines)


def _cmd_btransform(doc, inputs, args):
    model = doc.exposed
    rho = _require_rho(doc)
    rng = random.Random(args.seed)
    base = dolbeault.gh_cohomology(model, rho)
    results = []
    all_ok = True
    for k in range(args.count):
        B = corpus.random_closed_b_field(rng, model)
        ok = dolbeault.compare_b_transform(model, rho, B)
        results.append({"index": k, "B": str(B), "invariant": ok})
        all_ok = all_ok and ok
    data = {
        "gh": base.dims,
        "seed": args.seed,
        "count": args.count,
        "cases": results,
    }
    lines = ["GH table invariant under %d random closed shears: %s" % (
        args.count, "yes" if all_ok else "no")]
    return reports.Report("btransform", inputs, all_ok, data, lines)


_HANDLERS = {
    "check": _cmd_check,
    "cohomology": _cmd_cohomology,
    "bundle-verify": _cmd_bundle_verify,
    "kunneth": _cmd_kunneth,
    "spectral": _cmd_spectral,
    "btransform": _cmd_btransform,
}


def _dims_line(dims):
    return "  ".join("%d:%d" % (k, dims[k]) for k in sorted(dims))


def run_command(argv):
    """Dispatch one CLI invocation; returns the process exit code."""
    args = _build_argparser().parse_args(argv)
    handler = _HANDLERS[args.command]
    rendered = []
    worst = 0
    for path in args.files:
        start = time.monotonic()
        try:
            doc, inputs = _load(path)
            report = handler(doc, inputs, args)
        except (ParseError, ValueError, OSError, KeyError) as exc:
            print("error: %s: %s" % (path, exc), file=sys.stderr)
            return 2
        report.timing = time.monotonic() - start
        rendered.append(report)
        if report.verdict is False:
            worst = max(worst, 1)
    if args.json:
        if len(rendered) == 1:
            sys.stdout.write(reports.dumps(rendered[0].json_dict()))
        else:
            sys.stdout.write(
                reports.dumps({"schema": reports.SCHEMA, "reports": [r.json_dict() for r in rendered]})
            )
    else:
        for report in rendered:
            print(report.text())
    return worst


def main(argv=None):
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
