"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a mathematical check fails (the JSON report
names the witness), 2 for malformed input or usage errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import catalog
from .errors import AxiomViolation, FuscatError, InputError, NumericalError, PreconditionError
from .fusion_ring import DEFAULT_TOL, FusionRing, is_indecomposable, quantum_dims, validate

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2

_DEFAULT_RELATION_CATEGORIES = ['vec', 'vecz2', 'vecz3', 'vecz2w', 'fib', 'ising', 'mm:vecz2w:2']


def _default_tol() -> float:
    env = os.environ.get('FUSCAT_TOL')
    if not env:
        return DEFAULT_TOL
    try:
        return float(env)
    except ValueError:
        raise InputError(f'FUSCAT_TOL={env!r} is not a number') from None


def _positive_float(text):
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f'{text!r} is not a number') from None
    if not val > 0:
        raise argparse.ArgumentTypeError('tolerance must be positive')
    return val


def _round(x, digits=10):
    if isinstance(x, dict):
        return {str(k): _round(v, digits) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round(v, digits) for v in x]
    if isinstance(x, (float, np.floating)):
        return round(float(x), digits)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.ndarray):
        return _round(x.tolist(), digits)
    return x


def _emit(args, payload: dict, table=None):
    if args.json or table is None:
        print(json.dumps(_round(payload), indent=None if args.json else 1, ensure_ascii=False))
    else:
        for line in table(payload):
            print(line)


def _category(args, required=True):
    spec = getattr(args, 'target', None) or args.category
    if spec is None:
        if required:
            raise InputError('no category given (positional argument or --category)')
        return None
    return spec


def _load(args, spec=None):
    return catalog.load_any(spec or _category(args), tol=args.tol)


# ---------------------------------------------------------------------- commands

def cmd_verify(args) -> int:
    spec = _category(args)
    data = None
    if os.path.exists(spec) and spec.lower() not in catalog._ALIASES:
        try:
            with open(spec) as fh:
                data = json.load(fh)
        except json.JSONDecodeError as err:
            raise InputError(f'invalid JSON in {spec}: {err}') from err
    if data is not None:
        ring = FusionRing.from_json_dict(data, name=os.path.basename(spec))
        vrep = validate(ring)
        out = {'category': spec, 'ring': vrep.to_dict()}
        if not vrep.ok:
            out['ok'] = False
            _emit(args, out, _verify_table)
            return EXIT_VIOLATION
        if 'F' not in data:
            out['ok'] = True
            _emit(args, out, _verify_table)
            return EXIT_OK
        from .skeleton import Skeleton
        skel = Skeleton.from_json_dict(data, name=ring.name, tol=args.tol)
    else:
        skel = catalog.load_any(spec, tol=args.tol)
        out = {'category': spec, 'ring': validate(skel.ring).to_dict()}
    from .skeleton import verify_axioms
    rep = verify_axioms(skel, dual_functor=True, rng=args.seed)
    out['axioms'] = rep.to_dict()
    out['ok'] = bool(out['ring']['ok'] and rep.ok)
    _emit(args, out, _verify_table)
    return EXIT_OK if out['ok'] else EXIT_VIOLATION


def _verify_table(out):
    yield f"{out['category']}: {'PASS' if out['ok'] else 'FAIL'}"
    for v in out['ring']['violations']:
        yield f"  ring {v['kind']}: {v['witness']} {v['detail']}"
    if 'axioms' in out:
        for k, v in out['axioms']['residuals'].items():
            yield f"  {k:14s} {v:.3e}  witness {out['axioms']['witness'].get(k)}"


def cmd_dims(args) -> int:
    ring = catalog.load_ring_any(_category(args))
    dims = quantum_dims(ring)
    _emit(args, dims.to_dict(), lambda o: [f'{x:>10s}  {v:.10f}' for x, v in o['d'].items()]
          + [f"{'D':>10s}  {o['D']}"])
    return EXIT_OK


def cmd_corners(args) -> int:
    ring = catalog.load_ring_any(_category(args))
    dims = quantum_dims(ring)
    indec = is_indecomposable(ring)
    sums = {}
    for i in ring.corner_ids:
        for j in ring.corner_ids:
            labs = ring.corner_labels(i, j)
            sums[f'{i},{j}'] = {'labels': labs, 'sum_d2': sum(dims.d[x] ** 2 for x in labs)}
    vals = [v['sum_d2'] for v in sums.values() if v['labels']]
    agree = indec and (max(vals) - min(vals) <= args.tol * max(1.0, max(vals)))
    out = {'indecomposable': indec, 'corners': sums, 'agree': bool(agree)}
    if indec:
        out['D'] = vals[0]

    def table(o):
        yield f"indecomposable: {o['indecomposable']}"
        for k, v in o['corners'].items():
            yield f"  C_{k}: {len(v['labels'])} simples, sum d^2 = {v['sum_d2']:.10f}"
    _emit(args, out, table)
    return EXIT_OK if (agree or not indec) else EXIT_VIOLATION


def cmd_verify_relations(args) -> int:
    from .diagram import relation_sweep
    specs = [_category(args, required=False)] if _category(args, required=False) \
        else _DEFAULT_RELATION_CATEGORIES
    out = {'tol': args.tol, 'categories': {}}
    ok = True
    for spec in specs:
        res = relation_sweep(_load(args, spec))
        out['categories'][spec] = res
        ok = ok and all(r['residual'] < args.tol for r in res.values())
    out['ok'] = ok

    def table(o):
        yield f"{'category':16s} {'relation':10s} {'tuples':>6s} {'residual':>10s}"
        for spec, res in o['categories'].items():
            for name, r in res.items():
                yield f"{spec:16s} {name:10s} {r['count']:6d} {r['residual']:10.2e}"
    _emit(args, out, table)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_eval(args) -> int:
    from .diagram import OpenFamily, evaluate
    skel = _load(args)
    val = evaluate(args.expr, skel)
    if isinstance(val, OpenFamily):
        raise InputError('expression leaves node pairs open; pair every L with its R')
    if not hasattr(val, 'to_json_dict'):
        raise InputError('expression evaluates to an external tensor; print it per factor')
    out = val.to_json_dict()
    print(json.dumps(out, ensure_ascii=False))
    return EXIT_OK


def cmd_cp_check(args) -> int:
    from .diagram import evaluate
    from .positivity import is_cp
    skel = _load(args)
    theta = evaluate(args.theta, skel)
    a = args.a.split(',') if args.a else None
    b = args.b.split(',') if args.b else None
    cert = is_cp(theta, a, b, tol=args.tol)
    print(json.dumps(_round(cert.to_dict(), 14), ensure_ascii=False))
    return EXIT_OK if cert.is_cp else EXIT_VIOLATION


def cmd_center(args) -> int:
    from .center import enumerate_center
    skel = _load(args)
    if args.corner is not None:
        if args.corner not in skel.ring.corner_ids:
            raise InputError(f'no corner {args.corner}; corners are {list(skel.ring.corner_ids)}')
        skel = skel.corner(args.corner)
    data = enumerate_center(skel, seed=args.seed)
    out = data.to_dict()
    out['category'] = _category(args)
    if args.corner is not None:
        out['corner'] = args.corner
    ok = all(v < args.tol for v in data.residuals.values())
    if skel.D is not None and len(skel.ring.unit) == 1:
        out['sum_dim_squared_minus_D2'] = out['sum_dim_squared'] - skel.D ** 2
    print(json.dumps(_round(out), ensure_ascii=False))
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_corners_compare(args) -> int:
    from .center import corners_compare
    skel = _load(args)
    base = catalog.load_any(args.base, tol=args.tol) if args.base else None
    out = corners_compare(skel, base, seed=args.seed)
    out['category'] = _category(args)
    print(json.dumps(_round(out), ensure_ascii=False))
    return EXIT_OK if out['ok'] else EXIT_VIOLATION


def cmd_catalog(args) -> int:
    if args.action != 'list':
        raise InputError(f'unknown catalog action {args.action!r}')
    out = {'entries': catalog.CATALOG,
           'constructors': {'mm:<name>:<k>': 'k x k matrix multifusion category over <name>',
                            'sum:<a>:<b>': 'decomposable direct sum'}}
    _emit(args, out, lambda o: [f'{k:8s} {v}' for k, v in o['entries'].items()])
    return EXIT_OK


# ---------------------------------------------------------------------- parser

def _common(default):
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--tol', type=_positive_float, default=default(None),
                        help='numerical tolerance (default: $FUSCAT_TOL or 1e-9)')
    common.add_argument('--seed', type=int, default=default(0), help='random seed (default 0)')
    common.add_argument('--json', action='store_true', default=default(False),
                        help='print compact JSON')
    common.add_argument('--category', default=default(None),
                        help='catalog name, mm:<name>:<k>, sum:<a>:<b> or a JSON file')
    return common


def build_parser() -> argparse.ArgumentParser:
    # options may be given before or after the subcommand; the subcommand copies must not
    # overwrite values given before it, hence SUPPRESS defaults there
    common = _common(lambda v: v)
    sub_common = _common(lambda v: argparse.SUPPRESS)

    p = argparse.ArgumentParser(
        prog='fuscat', description=__doc__.splitlines()[0] + ' for skeletal unitary '
        '(multi)fusion categories.', parents=[common],
        epilog='Exit codes: 0 all checks pass, 1 mathematical violation, 2 input error. '
               'Tolerance falls back to the FUSCAT_TOL environment variable.')
    sub = p.add_subparsers(dest='command', required=True)

    def add(name, fn, help_, positional=True):
        sp = sub.add_parser(name, help=help_, parents=[sub_common])
        if positional:
            sp.add_argument('target', nargs='?', help='category (same forms as --category)')
        sp.set_defaults(fn=fn)
        return sp

    add('verify', cmd_verify, 'validate a fusion ring / run the axiom suite')
    add('dims', cmd_dims, 'quantum dimensions and global dimension')
    add('corners', cmd_corners, 'corner structure and per-corner sums of d^2')
    add('verify-relations', cmd_verify_relations,
        'residuals of the graphical-calculus relations (all bundled categories by default)')
    sp = add('eval', cmd_eval, 'evaluate a diagram expression')
    sp.add_argument('-e', '--expr', required=True, help='diagram expression')
    sp = add('cp-check', cmd_cp_check, 'decide complete positivity of theta : a abar -> b bbar')
    sp.add_argument('--theta', required=True, help='diagram expression for theta')
    sp.add_argument('--a', default=None, help='comma-separated letters of a (default: half the source)')
    sp.add_argument('--b', default=None, help='comma-separated letters of b (default: half the target)')
    sp = add('center', cmd_center, 'enumerate the simple objects of the Drinfeld center')
    sp.add_argument('--corner', type=int, default=None, help='use the corner C_ii instead')
    sp = add('corners-compare', cmd_corners_compare,
             'compare the center with the centers of the corners')
    sp.add_argument('--base', default=None,
                    help='compare against this fusion category (labels x_ii -> x)')
    sp = sub.add_parser('catalog', help='bundled categories', parents=[sub_common])
    sp.add_argument('action', choices=['list'])
    sp.set_defaults(fn=cmd_catalog)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        if args.tol is None:
            args.tol = _default_tol()
        return args.fn(args)
    except (InputError, PreconditionError) as err:
        print(json.dumps({'error': type(err).__name__, 'message': str(err)}), file=sys.stderr)
        return EXIT_INPUT
    except AxiomViolation as err:
        rep = err.report.to_dict() if err.report is not None else None
        print(json.dumps({'error': 'AxiomViolation', 'message': str(err), 'report': _round(rep)}))
        return EXIT_VIOLATION
    except NumericalError as err:
        print(json.dumps({'error': 'NumericalError', 'message': str(err)}))
        return EXIT_VIOLATION
    except FuscatError as err:  # pragma: no cover - all subclasses handled above
        print(json.dumps({'error': type(err).__name__, 'message': str(err)}), file=sys.stderr)
        return EXIT_INPUT


if __name__ == '__main__':  # pragma: no cover
    sys.exit(main())
