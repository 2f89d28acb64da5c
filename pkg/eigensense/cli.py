"""
Command line front end

    > eigensense mp-edges --sigma2 1 --alpha 0.25
    > eigensense synth --output h1.txt --K 10 --N 1000 --rho-db 0 --hypothesis H1 --seed 3
    > eigensense detect h1.txt --detector eig-ratio
    > eigensense estimate-snr h1.txt
    > eigensense spectrum h1.txt --sigma2 1 --output h1_hist.csv
    > eigensense experiment configs/paper_presets.json --preset paper-fig8 --trials 200

Records go to stdout as `key=value` lines, diagnostics to stderr.
Exit status: 0 = H0, 3 = H1, 2 = usage or domain error, 4 = not detectable.
"""
from typing import Any, Dict, List, Optional, Sequence

import sys
import logging
import argparse

from .benchmark import Benchmark
from .config import RunConfig
from .detectors import detector_classes, make_detector
from .errors import EigensenseError, NotDetectableError, DomainError
from .linalg import SOLVERS, eigh, gram
from .matrix_io import read_manifest, read_matrix, write_csv, write_manifest, write_matrix
from .rmt import from_db, mp_support, ratio_threshold, snr_from_ratio, spectral_histogram, to_db
from .signal import (
    FADING_KINDS, NOISE_KINDS, SAMPLE_FIELDS, SIGNAL_KINDS, Hypothesis, ObservationMatrix,
    ScenarioConfig, synthesize, unit_energy_channel
)
from .util import fmt

logger = logging.getLogger(__name__)

EXIT_H0 = 0
EXIT_H1 = 3
EXIT_ERROR = 2
EXIT_NOT_DETECTABLE = 4


def _record(**fields: Any) -> None:
    for key, value in fields.items():
        if isinstance(value, (float, int)) and not isinstance(value, bool):
            value = fmt(value)
        print(f'{key}={value}')


def _file_seed(path: str) -> str:
    manifest = read_manifest(path)
    if manifest is None or manifest.get('seed') is None:
        return 'none'
    return str(manifest['seed'])


def cmd_mp_edges(args: argparse.Namespace) -> int:
    support = mp_support(args.sigma2, args.alpha)
    _record(sigma2=args.sigma2, alpha=args.alpha, a=support.a, b=support.b,
            threshold=support.ratio_threshold, seed='none')
    return 0


def _detector_params(args: argparse.Namespace) -> Dict[str, Any]:
    params = {
        'solver': args.solver,
        'slack': args.slack,
        'vt': args.vt,
        'sensor': args.sensor,
    }
    return {k: v for k, v in params.items() if v is not None}


def cmd_detect(args: argparse.Namespace) -> int:
    obs = ObservationMatrix(read_matrix(args.input))
    detector = make_detector(args.detector, _detector_params(args))
    decision = detector.decide(obs, sigma2=args.sigma2)

    fields: Dict[str, Any] = {
        'detector': decision.detector_id,
        'K': obs.K,
        'N': obs.N,
        'statistic': decision.statistic,
        'threshold': decision.threshold,
    }
    if hasattr(decision, 'votes_h1'):
        fields['votes_h1'] = decision.votes_h1
        fields['votes_total'] = decision.votes_total
    _record(**fields, label=decision.label, seed=_file_seed(args.input))

    return EXIT_H1 if decision.label is Hypothesis.H1 else EXIT_H0


def cmd_synth(args: argparse.Namespace) -> int:
    if args.rho_db is not None and args.sigma2 is not None:
        raise DomainError('Give either --sigma2 or --rho-db, not both')

    # A unit energy channel makes rho = 1 / sigma2
    sigma2 = args.sigma2
    if sigma2 is None:
        sigma2 = 1.0 / from_db(args.rho_db) if args.rho_db is not None else 1.0

    config = ScenarioConfig(
        K=args.K, N=args.N, sigma2=sigma2,
        hypothesis=Hypothesis(args.hypothesis),
        noise_kind=args.noise, signal_kind=args.signal, fading=args.fading,
        channel=unit_energy_channel(args.K) if args.fading == 'fixed' else None,
        seed=args.seed, samples=args.samples,
    )
    obs = synthesize(config)

    write_matrix(args.output, obs.Y,
                 header=f'eigensense synth {config.hypothesis} seed={config.seed}')
    manifest = write_manifest(args.output, {
        'truth': config.hypothesis,
        'seed': config.seed,
        'digest': config.digest(),
        'config': config.to_dict(),
        'channel': None if obs.channel is None else [[z.real, z.imag] for z in obs.channel.h],
    })
    _record(output=args.output, manifest=manifest, truth=config.hypothesis,
            K=config.K, N=config.N, sigma2=config.sigma2, seed=config.seed)
    return 0


def cmd_estimate_snr(args: argparse.Namespace) -> int:
    obs = ObservationMatrix(read_matrix(args.input))
    alpha = obs.alpha
    threshold = ratio_threshold(alpha)
    spectrum = eigh(gram(obs.Y), solver=args.solver)

    if spectrum.lambda_min <= 0:
        raise DomainError(f'lambda_min={spectrum.lambda_min} leaves the ratio unbounded')
    ratio = spectrum.lambda_max / spectrum.lambda_min

    rho = snr_from_ratio(ratio, alpha)
    _record(ratio=ratio, threshold=threshold, rho=rho, rho_db=to_db(rho),
            seed=_file_seed(args.input))
    return 0


def cmd_spectrum(args: argparse.Namespace) -> int:
    obs = ObservationMatrix(read_matrix(args.input))
    spectrum = eigh(gram(obs.Y), solver=args.solver)
    table = spectral_histogram(spectrum.values, mp_support(args.sigma2, obs.alpha),
                               bins=args.bins)

    if args.output:
        write_csv(args.output, table)
        _record(output=args.output, bins=args.bins, seed=_file_seed(args.input))
    else:
        print(f'# seed={_file_seed(args.input)}')
        table.to_csv(sys.stdout, index=False, float_format='%.9g')
    return 0


def cmd_experiment(args: argparse.Namespace) -> int:
    config = RunConfig.from_file(args.config).with_overrides(
        trials=args.trials, seed=args.seed, threads=args.threads,
        path=args.output, presets=args.preset,
    )
    _record(id=config.id, seed=config.seed)

    benchmark = Benchmark(config)
    results_path = benchmark.run(force=args.force)
    _record(output=results_path, manifest=benchmark.manifest_path)
    return 0


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f'expected an integer >= 1, got {text}')
    return value


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError(f'seed must be an unsigned 64 bit integer, got {text}')
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='eigensense',
        description='Blind cooperative spectrum sensing with random matrix theory'
    )
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='-v for progress, -vv for debug output, both on stderr')
    commands = parser.add_subparsers(dest='command', required=True)

    p = commands.add_parser('mp-edges', help='Marchenko-Pastur edges and ratio threshold')
    p.add_argument('--sigma2', type=float, default=1.0, help='Noise variance')
    p.add_argument('--alpha', type=float, required=True, help='K / N, in (0,1)')
    p.set_defaults(func=cmd_mp_edges)

    p = commands.add_parser('detect', help='Run one detector on a matrix file')
    p.add_argument('input', help='Path to a matrix file')
    p.add_argument('--detector', choices=sorted(detector_classes), default='eig-ratio')
    p.add_argument('--sigma2', type=float, default=None,
                   help='Noise variance, needed by mp-support and by energy without --vt')
    p.add_argument('--slack', type=float, default=None, help='Relative slack on [a, b]')
    p.add_argument('--vt', type=float, default=None, help='Energy threshold V_T')
    p.add_argument('--sensor', type=int, default=None, help='Row used by the energy detector')
    p.add_argument('--solver', choices=SOLVERS, default=None)
    p.set_defaults(func=cmd_detect)

    p = commands.add_parser('synth', help='Write a synthetic observation matrix')
    p.add_argument('--output', required=True, help='Path of the matrix file to write')
    p.add_argument('--K', type=_positive_int, required=True, help='Number of sensors')
    p.add_argument('--N', type=_positive_int, required=True, help='Samples per sensor')
    p.add_argument('--sigma2', type=float, default=None, help='Noise variance')
    p.add_argument('--rho-db', type=float, default=None,
                   help='SNR in dB for a unit energy channel, sets sigma2 = 1 / rho')
    p.add_argument('--hypothesis', choices=[h.value for h in Hypothesis], default='H0')
    p.add_argument('--noise', choices=NOISE_KINDS, default='gaussian')
    p.add_argument('--signal', choices=SIGNAL_KINDS, default='gaussian')
    p.add_argument('--fading', choices=FADING_KINDS, default='rayleigh')
    p.add_argument('--samples', choices=SAMPLE_FIELDS, default='complex')
    p.add_argument('--seed', type=_seed, default=0)
    p.set_defaults(func=cmd_synth)

    p = commands.add_parser('experiment', help='Run the experiments of a config file')
    p.add_argument('config', help='Path to a JSON run config')
    p.add_argument('--preset', action='append', default=None,
                   help='Only run the named experiment, may be repeated')
    p.add_argument('--trials', type=_positive_int, default=None)
    p.add_argument('--seed', type=_seed, default=None)
    p.add_argument('--threads', type=int, default=None, help='Worker count, 0 for all cores')
    p.add_argument('--output', default=None, help='Output directory, overrides the config path')
    p.add_argument('--force', action='store_true', help='Rerun experiments already complete')
    p.set_defaults(func=cmd_experiment)

    p = commands.add_parser('estimate-snr', help='Estimate the SNR from lmax / lmin')
    p.add_argument('input', help='Path to a matrix file')
    p.add_argument('--solver', choices=SOLVERS, default='jacobi')
    p.set_defaults(func=cmd_estimate_snr)

    p = commands.add_parser('spectrum', help='Eigenvalue histogram against the MP density')
    p.add_argument('input', help='Path to a matrix file')
    p.add_argument('--sigma2', type=float, default=1.0, help='Noise variance of the MP law')
    p.add_argument('--bins', type=_positive_int, default=30)
    p.add_argument('--solver', choices=SOLVERS, default='jacobi')
    p.add_argument('--output', default=None, help='CSV path, stdout if not given')
    p.set_defaults(func=cmd_spectrum)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    if args.verbose:
        logging.basicConfig(
            level=logging.DEBUG if args.verbose > 1 else logging.INFO,
            format='%(asctime)s %(name)s %(levelname)s: %(message)s',
            stream=sys.stderr,
        )

    try:
        return args.func(args)
    except NotDetectableError as e:
        logger.debug(e)
        print('error: signal not detectable; cannot estimate SNR', file=sys.stderr)
        return EXIT_NOT_DETECTABLE
    except EigensenseError as e:
        print(f'error: {e}', file=sys.stderr)
        return EXIT_ERROR
    except OSError as e:
        print(f'error: {e}', file=sys.stderr)
        return EXIT_ERROR


def run(argv: Optional[List[str]] = None) -> None:
    sys.exit(main(argv))
