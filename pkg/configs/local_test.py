import os
import json

benchmark_name = 'local_test'
current_dir = os.path.dirname(os.path.abspath(__file__))
config_path = os.path.join(current_dir, f'{benchmark_name}.json')

# A few hundred trials per point, seconds rather than minutes
seed = 5
trials = 200

config = {
    'id': f'{benchmark_name}',
    'path': f'./{benchmark_name}',
    'seed': seed,
    'threads': 1,
    'experiments': [
        {
            'name': 'h0-alpha0.5',
            'kind': 'convergence',
            'alpha': 0.5,
            'hypothesis': 'H0',
            'Ns': [20, 50, 100],
            'trials': trials,
            'samples': 'real',
        },
        {
            'name': 'h1-alpha0.1',
            'kind': 'convergence',
            'alpha': 0.1,
            'hypothesis': 'H1',
            'Ns': [50, 100],
            'trials': trials,
            'rho_db': 0.0,
        },
        {
            'name': 'known-variance-K10',
            'kind': 'comparison',
            'K': 10,
            'known_variance': True,
            'Ns': [20, 40, 60],
            'trials': trials,
            'snr': 'per-sensor',
            'dat': True,
        },
    ]
}

with open(config_path, 'w') as f:
    json.dump(config, f, indent=2)
