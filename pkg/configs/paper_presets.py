import os
import json
from itertools import product

benchmark_name = 'paper_presets'
current_dir = os.path.dirname(os.path.abspath(__file__))
config_path = os.path.join(current_dir, f'{benchmark_name}.json')

seed = 2008
trials = 2000
rho_db = -5.0
solver = 'lapack'

# Real samples match the published finite size ratios
convergence_samples = 'real'
# SNR at each sensor, sigma2 = 1/(K rho)
comparison_snr = 'per-sensor'

# alpha * N must be an integer for every swept N
convergence_Ns = [20, 50, 100, 200, 400, 1000]
convergence_figures = {
    ('H0', 0.5): 'paper-fig4',
    ('H0', 0.1): 'paper-fig5',
    ('H1', 0.5): 'paper-fig6',
    ('H1', 0.1): 'paper-fig7',
}

K = 10
comparison_Ns = [10, 20, 30, 40, 50, 60]
comparison_figures = {
    True: 'paper-fig8',
    False: 'paper-fig9',
}

config = {
    'id': f'{benchmark_name}',
    'path': f'./results/{benchmark_name}',
    'seed': seed,
    'threads': 0,
    'experiments': [
        {
            'name': convergence_figures[(hypothesis, alpha)],
            'kind': 'convergence',
            'alpha': alpha,
            'hypothesis': hypothesis,
            'Ns': convergence_Ns,
            'trials': trials,
            'rho_db': rho_db,
            'samples': convergence_samples,
            'solver': solver,
            'dat': True,
        }
        for hypothesis, alpha
        in product(['H0', 'H1'], [0.5, 0.1])
    ] + [
        {
            'name': comparison_figures[known_variance],
            'kind': 'comparison',
            'K': K,
            'known_variance': known_variance,
            'Ns': comparison_Ns,
            'trials': trials,
            'rho_db': rho_db,
            'snr': comparison_snr,
            'solver': solver,
            'dat': True,
        }
        for known_variance in [True, False]
    ]
}

with open(config_path, 'w') as f:
    json.dump(config, f, indent=2)
