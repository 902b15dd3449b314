# -*- coding: utf-8 -*-
"""
Command-line interface (CLI) for diagsynth.
Handles argument parsing and dispatches the synth, sweep, decide, verify and
mcrz subcommands.
"""

import sys
import argparse
import traceback
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

# --- Imports from other modules ---
try:
    from . import __version__
    from .diagsynth_circuit import format_circuit, parse_circuit, to_qasm
    from .diagsynth_config import (
        DEFAULT_C0, DEFAULT_DENSE_LIMIT, DEFAULT_KAPPA, DEFAULT_MAX_T, DEFAULT_METHOD, DEFAULT_ROT_MODE,
        DEFAULT_SWEEP_LIMIT, INVARIANCE_TOL, METHODS, ROT_MODES, VERIFY_PASS_TOL, get_saved_config, save_config,
    )
    from .diagsynth_core import DiagonalSynthesizer, mcrz_spec, verify
    from .diagsynth_cost import (
        beta_check, best_case_check, decision_surface, decision_surface_csv, sweep_toffoli_counts,
    )
    from .diagsynth_phase import random_block_spec
    from .diagsynth_schema import parse_spec
    from .diagsynth_styling import Colors, paint
    from .diagsynth_utils import DiagSynthError, ReferenceOutOfTolerance, VerificationFailed, format_float, log_message
    from .diagsynth_walsh import walsh_spectrum_csv, walsh_transform
except ImportError as e:
    print(f"Error importing diagsynth modules: {e}", file=sys.stderr)
    print("Please ensure you are running this from the correct directory or have installed the package.", file=sys.stderr)
    sys.exit(1)


# --- Argument types ---
def _int_range(text: str) -> List[int]:
    """START:STOP[:STEP], inclusive of STOP."""
    try:
        parts = [int(p) for p in text.split(":")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{text}' is not START:STOP[:STEP] with integers")
    if len(parts) not in (2, 3) or (len(parts) == 3 and parts[2] <= 0) or parts[0] > parts[1]:
        raise argparse.ArgumentTypeError(f"'{text}' is not an increasing START:STOP[:STEP] range")
    step = parts[2] if len(parts) == 3 else 1
    return list(range(parts[0], parts[1] + 1, step))

def _eps_range(text: str) -> List[float]:
    """MAX:MIN:COUNT, log-spaced precisions from MAX down to MIN."""
    try:
        hi, lo, count = text.split(":")
        hi, lo, count = float(hi), float(lo), int(count)
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{text}' is not MAX:MIN:COUNT")
    if not (0 < lo <= hi < 1) or count < 1:
        raise argparse.ArgumentTypeError(f"'{text}' needs 0 < MIN <= MAX < 1 and COUNT >= 1")
    return [float(e) for e in np.logspace(np.log10(hi), np.log10(lo), count)]


# --- Argument Parsing ---
def _shared_parser() -> argparse.ArgumentParser:
    """Flags every subcommand accepts; None means 'saved default, then built-in'."""
    shared = argparse.ArgumentParser(add_help=False)

    synth_group = shared.add_argument_group('Synthesis Options')
    synth_group.add_argument(
        '--eps',
        type=float,
        default=None,
        help="Target precision (max-entry deviation up to global phase).\nExact-Rz runs only use it to compare methods."
    )
    synth_group.add_argument(
        '--method',
        choices=list(METHODS),
        default=None,
        help=f"Decomposition: walsh, pcd, or auto (measure both). (Default: {DEFAULT_METHOD})"
    )
    synth_group.add_argument(
        '--rot',
        choices=list(ROT_MODES),
        default=None,
        help=f"Rotation synthesis: exact (keep Rz), brute (Clifford+T search), cost (estimate only). (Default: {DEFAULT_ROT_MODE})"
    )
    synth_group.add_argument(
        '--max-t',
        type=int,
        metavar='N',
        default=None,
        dest='max_t',
        help=f"Largest T-count the brute-force search will try. (Default: {DEFAULT_MAX_T})"
    )

    model_group = shared.add_argument_group('Cost Model Options')
    model_group.add_argument(
        '--c0',
        type=float,
        default=None,
        help=f"Rotation cost slope, T ~ C0 log2(1/eps). (Default: {DEFAULT_C0})"
    )
    model_group.add_argument(
        '--kappa',
        type=float,
        default=None,
        help=f"Worst-case entanglement constant, E ~ kappa n^2. (Default: {DEFAULT_KAPPA})"
    )
    model_group.add_argument(
        '--dense-limit',
        type=int,
        metavar='W',
        default=None,
        dest='dense_limit',
        help=f"Widest circuit simulated densely for verification. (Default: {DEFAULT_DENSE_LIMIT})"
    )

    behavior_group = shared.add_argument_group('Behavior Options')
    behavior_group.add_argument(
        '--out',
        metavar='PATH',
        default=None,
        help="Write the main output here instead of standard output."
    )
    behavior_group.add_argument(
        '-v', '--verbose',
        action='store_true',
        default=None,
        help="Show verbose logging messages during processing."
    )
    color_parser = behavior_group.add_mutually_exclusive_group()
    color_parser.add_argument(
        '--color',
        action='store_true',
        dest='colorize',
        default=None,
        help="Force colorized messages (Default: auto-detect based on TTY)."
    )
    color_parser.add_argument(
        '--no-color',
        action='store_false',
        dest='colorize',
        help="Disable colorized messages."
    )
    behavior_group.add_argument(
        '--save-defaults',
        action='store_true',
        default=False,
        dest='save_defaults',
        help="Remember the synthesis, cost model and behavior flags of this run."
    )
    # Hidden debug option
    behavior_group.add_argument(
        '--debug',
        action='store_true',
        default=False,
        help=argparse.SUPPRESS
    )
    return shared

def parse_args() -> argparse.Namespace:
    """Parses command-line arguments."""
    shared = _shared_parser()
    parser = argparse.ArgumentParser(
        description=f"diagsynth v{__version__} - Clifford+T synthesis of diagonal unitaries.",
        formatter_class=argparse.RawTextHelpFormatter
    )
    parser.add_argument(
        '--version',
        action='version',
        version=f'diagsynth v{__version__}'
    )
    commands = parser.add_subparsers(dest='command', metavar='COMMAND')
    commands.required = True

    # --- synth ---
    synth = commands.add_parser(
        'synth', parents=[shared], formatter_class=argparse.RawTextHelpFormatter,
        help="Synthesize a circuit for a JSON diagonal spec."
    )
    synth.add_argument(
        'spec',
        nargs='?',
        default=None,
        help="JSON spec with 'n' and either 'blocks' or 'diagonal_thetas'.\nOmit when using --random-n."
    )
    target_group = synth.add_argument_group('Random Target Options')
    target_group.add_argument('--random-n', type=int, metavar='N', default=None, dest='random_n',
                              help="Synthesize a random block diagonal on N qubits instead of a spec file.")
    target_group.add_argument('--random-k', type=int, metavar='K', default=2, dest='random_k',
                              help="Number of distinct phases of the random target. (Default: 2)")
    target_group.add_argument('--seed', type=int, default=0,
                              help="Seed for the random target. (Default: 0)")
    output_group = synth.add_argument_group('Output Options')
    output_group.add_argument(
        '--emit',
        choices=['text', 'qasm', 'walsh-csv'],
        default='text',
        help="Circuit text format, OPENQASM 2.0, or the target's Walsh spectrum. (Default: text)"
    )
    output_group.add_argument('--report', metavar='PATH', default=None,
                              help="Write the JSON cost report here (Default: stdout, or stderr when the circuit goes to stdout).")
    output_group.add_argument('--verify', action='store_true', default=False,
                              help="Check the circuit against the target by dense simulation.")

    # --- sweep ---
    sweep = commands.add_parser(
        'sweep', parents=[shared], formatter_class=argparse.RawTextHelpFormatter,
        help="Toffoli and T counts of X^n(ell) for every ell < 2^n."
    )
    sweep.add_argument('--n', type=int, required=True, help="Register size.")
    sweep.add_argument('--limit', type=int, default=DEFAULT_SWEEP_LIMIT,
                       help=f"Largest n accepted. (Default: {DEFAULT_SWEEP_LIMIT})")
    sweep.add_argument('--fit-from', type=int, metavar='N0', default=None, dest='fit_from',
                       help="Also fit beta and the best-case slope over n in [N0, n] and compare to reference values.")

    # --- decide ---
    decide = commands.add_parser(
        'decide', parents=[shared], formatter_class=argparse.RawTextHelpFormatter,
        help="Walsh/PCD decision surface as CSV."
    )
    decide.add_argument('--n', type=int, nargs='+', required=True, help="Register sizes.")
    decide.add_argument('--k-range', type=_int_range, required=True, dest='k_range', metavar='START:STOP[:STEP]',
                        help="Numbers of distinct phases (inclusive).")
    decide.add_argument('--eps-range', type=_eps_range, required=True, dest='eps_range', metavar='MAX:MIN:COUNT',
                        help="Log-spaced precisions, e.g. 1e-2:1e-12:11.")

    # --- verify ---
    check = commands.add_parser(
        'verify', parents=[shared], formatter_class=argparse.RawTextHelpFormatter,
        help="Compare a circuit file against a JSON spec."
    )
    check.add_argument('circuit', help="Circuit in the text format.")
    check.add_argument('spec', help="JSON diagonal spec.")

    # --- mcrz ---
    mcrz = commands.add_parser(
        'mcrz', parents=[shared], formatter_class=argparse.RawTextHelpFormatter,
        help="Fully controlled Rz(theta) on n controls."
    )
    mcrz.add_argument('--n', type=int, required=True, help="Number of controls.")
    mcrz.add_argument('--theta', type=float, required=True, help="Rotation angle.")
    mcrz.add_argument('--emit', choices=['text', 'qasm'], default='text')
    mcrz.add_argument('--report', metavar='PATH', default=None)
    mcrz.add_argument('--verify', action='store_true', default=False)

    return parser.parse_args()


# --- Configuration ---
_BUILTIN_DEFAULTS: Dict[str, Any] = {
    'eps': None, 'method': DEFAULT_METHOD, 'rot': DEFAULT_ROT_MODE, 'c0': DEFAULT_C0,
    'kappa': DEFAULT_KAPPA, 'dense_limit': DEFAULT_DENSE_LIMIT, 'max_t': DEFAULT_MAX_T, 'verbose': False,
}

def resolve_config(args: argparse.Namespace, saved: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Flags override saved defaults, which override built-in constants."""
    saved = saved if saved is not None else get_saved_config()
    config: Dict[str, Any] = {}
    for key, builtin in _BUILTIN_DEFAULTS.items():
        value = getattr(args, key, None)
        config[key] = value if value is not None else saved.get(key, builtin)
    colorize = getattr(args, 'colorize', None)
    config['colorize'] = colorize if colorize is not None else saved.get('colorize', sys.stderr.isatty())
    return config

SYNTHESIZER_KEYS = ('eps', 'method', 'rot_mode', 'c0', 'kappa', 'max_t', 'dense_limit', 'verbose', 'colorize')

def _synthesizer_kwargs(config: Dict[str, Any]) -> Dict[str, Any]:
    kwargs = dict(config)
    kwargs['rot_mode'] = kwargs.pop('rot')
    return {k: kwargs[k] for k in SYNTHESIZER_KEYS if k in kwargs}


# --- Output ---
def _write(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    Path(path).write_text(text, encoding='utf-8')

def _emit_synthesis(args, result, spec) -> None:
    """Renders everything first so a failure never leaves a partial file behind."""
    if args.emit == 'qasm':
        body = to_qasm(result.circuit)
    elif args.emit == 'walsh-csv':
        body = walsh_spectrum_csv(walsh_transform(spec.thetas))
    else:
        body = format_circuit(result.circuit)
    report = result.to_report().model_dump_json(indent=2) + "\n"

    _write(body, args.out)
    if args.report:
        Path(args.report).write_text(report, encoding='utf-8')
    elif args.out:
        sys.stdout.write(report)
    else:
        sys.stderr.write(report)


# --- Commands ---
def cmd_synth(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    if args.random_n is not None:
        if args.spec is not None:
            raise ValueError("Give either a spec file or --random-n, not both")
        spec = random_block_spec(args.random_n, args.random_k, np.random.default_rng(args.seed))
    elif args.spec is not None:
        spec = parse_spec(Path(args.spec).read_text(encoding='utf-8'))
    else:
        raise ValueError("A spec file or --random-n is required")

    synthesizer = DiagonalSynthesizer(spec, verify=args.verify, **_synthesizer_kwargs(config))
    result = synthesizer.run()
    _emit_synthesis(args, result, spec)
    return 0

def cmd_mcrz(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    kwargs = _synthesizer_kwargs(config)
    if args.method is None:
        kwargs['method'] = 'pcd'
    spec = mcrz_spec(args.n, args.theta)
    result = DiagonalSynthesizer(spec, verify=args.verify, **kwargs).run()
    _emit_synthesis(args, result, spec)
    return 0

def cmd_sweep(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    table = sweep_toffoli_counts(args.n, args.limit)
    summary = (f"n={args.n}: max toffoli {table.max_toffoli}, min odd T {table.min_odd_t}, "
               f"beta ~ {table.max_toffoli / float(args.n ** 2):.4g}")
    checks = []
    if args.fit_from is not None:
        ns = list(range(args.fit_from, args.n + 1))
        checks.append(beta_check(ns))
        if any(n > 3 for n in ns):
            checks.append(best_case_check(ns))
        for check in checks:
            log_message(check.describe(), "success" if check.within else "error", config['verbose'], config['colorize'])
    _write(table.to_csv(), args.out)
    print(summary, file=sys.stderr)
    failed = [check.describe() for check in checks if not check.within]
    if failed:
        raise ReferenceOutOfTolerance("Sweep fit outside tolerance: " + "; ".join(failed))
    return 0

def cmd_decide(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    rows = decision_surface(args.n, args.k_range, args.eps_range, config['c0'], config['kappa'])
    _write(decision_surface_csv(rows), args.out)
    return 0

def cmd_verify(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    circuit = parse_circuit(Path(args.circuit).read_text(encoding='utf-8'))
    spec = parse_spec(Path(args.spec).read_text(encoding='utf-8'))
    eps = config['eps'] if config['eps'] is not None else spec.eps
    tolerance = eps if eps is not None else VERIFY_PASS_TOL
    leak_tol = eps if eps is not None else max(INVARIANCE_TOL, VERIFY_PASS_TOL)
    colorize = config['colorize']
    try:
        deviation = verify(circuit, spec, leak_tol, config['dense_limit'])
    except VerificationFailed as e:
        _write(f"{paint('FAIL', 'FAIL', colorize)} {e}\n", args.out)
        return VerificationFailed.exit_code
    verdict = "PASS" if deviation <= tolerance else "FAIL"
    _write(f"{paint(verdict, verdict, colorize)} deviation={format_float(deviation)} "
           f"tolerance={format_float(tolerance)}\n", args.out)
    return 0 if verdict == "PASS" else VerificationFailed.exit_code

COMMANDS = {
    'synth': cmd_synth,
    'sweep': cmd_sweep,
    'decide': cmd_decide,
    'verify': cmd_verify,
    'mcrz': cmd_mcrz,
}


# --- Main Execution Logic ---
def main():
    """Main function to run the diagsynth command line."""
    try:
        args = parse_args()
        config = resolve_config(args)

        if args.debug:
            print(f"diagsynth v{__version__}", file=sys.stderr)
            print(f"Python: {sys.version}", file=sys.stderr)
            print(f"Resolved configuration: {config}", file=sys.stderr)

        if args.save_defaults:
            save_config(config)
            log_message("Saved current flags as defaults.", "success", config['verbose'], config['colorize'])

        try:
            exit_code = COMMANDS[args.command](args, config)
        except DiagSynthError as e:
            print(f"{Colors.RED}Error: {e}{Colors.RESET}" if config['colorize'] else f"Error: {e}", file=sys.stderr)
            sys.exit(e.exit_code)
        except (FileNotFoundError, IsADirectoryError, ValueError) as e:
            print(f"{Colors.RED}Error: {e}{Colors.RESET}" if config['colorize'] else f"Error: {e}", file=sys.stderr)
            sys.exit(2)
        except Exception:
            print(f"\nAn unexpected error occurred during execution:", file=sys.stderr)
            print(traceback.format_exc(), file=sys.stderr)
            sys.exit(1)
        sys.exit(exit_code)

    except KeyboardInterrupt:
        print("\nOperation cancelled by user.", file=sys.stderr)
        sys.exit(130)

if __name__ == '__main__':
    main()
