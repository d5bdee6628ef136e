#!/usr/bin/env python3
"""
hlestim - local JSON API
Flask server exposing the estimation calculators to notebooks and plotting front-ends.
Every route accepts a GET query string or a POST JSON body.
"""

import logging
import os
import sys

from flask import Flask, jsonify, request
from flask_cors import CORS

# Add the py directory to the Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'py'))

from hlestim import DomainError, __version__
from hlestim.complexity import ComplexityParams, Method, run_method, scaling, shadow_queries
from hlestim.config import load_config
from hlestim.export import jsonable
from hlestim.fermion import sector_norm_report
from hlestim.hsdeg import hs_degree
from hlestim.log import setup_logging
from hlestim.probe import ProbeFamily, make_probe, probe_variance
from hlestim.qae import DEFAULT_THETA_HI, DEFAULT_THETA_LO, HALF_PI, max_mse
from hlestim.qpe import max_failure

log = logging.getLogger("hlestim.server")

app = Flask(__name__)
CORS(app)

_MISSING = object()
_TRUE = ("1", "true", "yes", "on")


def _params():
    if request.method == 'POST':
        return request.get_json(silent=True) or {}
    return request.args


def _get(params, name, cast, default=_MISSING):
    raw = params.get(name)
    if raw is None or raw == "":
        if default is _MISSING:
            raise ValueError(f"missing parameter '{name}'")
        return default
    if cast is bool:
        return raw if isinstance(raw, bool) else str(raw).lower() in _TRUE
    try:
        return cast(raw)
    except (TypeError, ValueError):
        raise ValueError(f"parameter '{name}' is not a valid {cast.__name__} (got {raw!r})") from None


def _respond(stage, compute):
    """Run one calculation; DomainError/ValueError map to 400, anything else to 500."""
    params = _params()
    try:
        result = compute(params)
        log.info("[%s] ok %s", stage, dict(params))
        return jsonify(jsonable(result))
    except (DomainError, ValueError) as e:
        log.warning("[%s] rejected: %s", stage, e)
        return jsonify({'error': str(e)}), 400
    except Exception as e:
        log.error("[ERROR] %s failed: %s", stage, e)
        return jsonify({'error': str(e)}), 500


# -----------------------
# Routes
# -----------------------

@app.route('/api/health', methods=['GET'])
def health():
    return jsonify({'status': 'ok', 'version': __version__})


@app.route('/api/hs-degree', methods=['GET', 'POST'])
def api_hs_degree():
    def compute(p):
        return {'Q': hs_degree(_get(p, 't', float), _get(p, 'eps', float))}
    return _respond('HSDEG', compute)


@app.route('/api/complexity', methods=['GET', 'POST'])
def api_complexity():
    """
    Total oracle queries of one method.

    Returns:
    {
        "L": "<decimal string, exact>",
        "method", "query", "space",
        "trace": [ per-iteration records ]   (when trace=true)
    }
    """
    def compute(p):
        params = ComplexityParams(_get(p, 'N', int), _get(p, 'eta', int, 0), _get(p, 'k', int),
                                  _get(p, 'eps', float), Method(_get(p, 'method', str)))
        total, trace = run_method(params)
        body = {'method': params.method.value, 'L': str(total), **scaling(params.method)}
        if _get(p, 'trace', bool, False):
            body['trace'] = [t.to_dict() for t in trace]
        return body
    return _respond('COMPLEXITY', compute)


@app.route('/api/probe-failure', methods=['GET', 'POST'])
def api_probe_failure():
    def compute(p):
        family = ProbeFamily(_get(p, 'family', str))
        alpha = _get(p, 'alpha', float, 0.98) if family is ProbeFamily.KAISER else None
        state = make_probe(family, _get(p, 'p', int, 3), alpha)
        summary = max_failure(state, _get(p, 'grid', int, load_config().qpe_points))
        return {'family': state.label, 'max': summary.max, 'argmax': summary.argmax,
                'variance': probe_variance(state)}
    return _respond('QPE', compute)


@app.route('/api/qae-mse', methods=['GET', 'POST'])
def api_qae_mse():
    def compute(p):
        q = _get(p, 'q', int)
        probe = _get(p, 'probe', str, 'sine')
        if probe not in ('sine', 'uniform'):
            raise ValueError(f"probe must be 'sine' or 'uniform' (got {probe!r})")
        family = ProbeFamily.SINE_QAE if probe == 'sine' else ProbeFamily.UNIFORM
        lo, hi = (0.0, HALF_PI) if _get(p, 'full_range', bool, False) else (DEFAULT_THETA_LO, DEFAULT_THETA_HI)
        sweep = max_mse(make_probe(family, q), q, _get(p, 'points', int, load_config().qae_points), lo, hi)
        return {'q': q, 'probe': probe, 'max': sweep.max, 'argmax': sweep.argmax}
    return _respond('QAE', compute)


@app.route('/api/fermion-norm', methods=['GET', 'POST'])
def api_fermion_norm():
    def compute(p):
        return sector_norm_report(_get(p, 'N', int), _get(p, 'eta', int), _get(p, 'k', int)).to_dict()
    return _respond('FERMION', compute)


def run_test_mode():
    """Test mode: run the anchor computations once and print them."""
    print("=" * 60)
    print("hlestim Test Mode")
    print("=" * 60)
    try:
        checks = [
            ("hs_degree(t=1, eps=2^-10)", hs_degree(1.0, 2.0 ** -10), 5),
            ("shadow queries (N=2, k=1, eps=0.1)", shadow_queries(2, 1, 0.1), 300),
            ("per-observable QAE queries at eps=1e-3", run_method(ComplexityParams(1, 0, 1, 1e-3, Method.QAE))[0], 4097),
        ]
        for name, got, expected in checks:
            status = "OK" if got == expected else "MISMATCH"
            print(f"  [{status}] {name}: {got} (expected {expected})")

        v = probe_variance(make_probe(ProbeFamily.COS1, 3))
        print(f"  [INFO] cos1 probe variance (p=3): {v:.6f}")
        summary = max_failure(make_probe(ProbeFamily.COS1, 3), 10_000)
        print(f"  [INFO] cos1 max failure (p=3, 10^4 grid): {summary.max:.6f} at theta={summary.argmax:.4f}")
        uniform = max_mse(make_probe(ProbeFamily.UNIFORM, 6), 6, 129, 0.0, HALF_PI)
        print(f"  [INFO] uniform q=6 max mse: {uniform.max:.12f} (1/2^7 = {1 / 128:.12f}, "
              f"diff {abs(uniform.max - 1 / 128):.1e})")
        report = sector_norm_report(2, 1, 1)
        print(f"  [INFO] sector norm (2,1,1): brute={report.brute_norm:.12g} closed={report.closed_coefficient:g}")
    except Exception as e:
        sys.stderr.write(f"hlestim test mode error: {str(e)}\n")
    finally:
        print("Test complete")


if __name__ == "__main__":
    config = load_config()
    setup_logging(config.log_level)
    if len(sys.argv) > 1 and sys.argv[1].lower() == 'test':
        run_test_mode()
    else:
        print("\n" + "=" * 60)
        print(f"hlestim {__version__} JSON API is Ready!")
        print("=" * 60)
        print(f"\nServer Address: http://{config.host}:{config.port}")
        print(f"Workers: {config.workers}   Eigen-solver: {config.eigensolver}")
        print("\nRoutes:")
        print("  - /api/health")
        print("  - /api/hs-degree      t, eps")
        print("  - /api/complexity     method, N, eta, k, eps, trace")
        print("  - /api/probe-failure  family, p, alpha, grid")
        print("  - /api/qae-mse        q, probe, points, full_range")
        print("  - /api/fermion-norm   N, eta, k")
        print("\n" + "=" * 60)
        print("Ready! Waiting for requests...")
        print("=" * 60 + "\n")

        app.run(host=config.host, port=config.port, debug=False, threaded=True)
