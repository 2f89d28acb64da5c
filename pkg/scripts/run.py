"""
Runs every experiment of a config
    > python scripts/run.py --config <path/to/config>

"""
import argparse

from eigensense import Benchmark


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Run an experiment config")
    parser.add_argument('-c', '--config', type=str, required=True,
                        help="Path to the config file")
    parser.add_argument('--status', action='store_true',
                        help="Only print which experiments are complete")
    parser.add_argument('--force', action='store_true',
                        help="Rerun experiments that are already complete")
    args = parser.parse_args()

    benchmark = Benchmark(args.config)

    if args.status:
        for state, jobs in benchmark.status().items():
            print(f'{state}: {[job.name() for job in jobs]}')
    else:
        benchmark.run(force=args.force)
