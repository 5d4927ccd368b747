"""
Shared configuration: data paths, route names and DOT styling.
Keeps the CLI, reporter and deciders consistent on names and labels.
"""

import os

PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
APP_DATA_DIR = os.path.join(PROJECT_ROOT, 'data')
LOGS_DIR = os.path.join(APP_DATA_DIR, 'logs')
AUTOMATA_DIR = os.path.join(APP_DATA_DIR, 'automata')
SETTINGS_FILE = os.path.join(APP_DATA_DIR, 'settings.json')

# Route names reported by decide_hd and printed by the CLI
ROUTES = {
    'reach_safety_finite': 'G1-{cls}-safety',
    'reach_safety_infinite': 'G1-{cls}-weak',
    'sup_finite': 'G1-Sup-safety',
    'inf_finite': 'G1-Inf-safety',
    'inf_infinite': 'G1-Inf-weak',
    'dsum': 'G1-DSum-multidiscount',
    'sup_infinite': 'G2-Sup-cobuchi',
    'limsup': 'G2-LimSup-parity',
    'liminf': 'G2-LimInf-parity',
    'single_weight': '{cls}-single-weight',
}

# Builder names stamped on TokenGameArena
BUILDERS = {
    'g1_reach_safety': 'build_g1_reach_safety',
    'g1_sup_finite': 'build_g1_sup_finite',
    'g1_sup_infinite': 'build_g1_sup_infinite',
    'g1_inf': 'build_g1_inf',
    'g1_dsum': 'build_g1_dsum',
    'g2_sup': 'build_g2_sup',
    'g2_limsup': 'build_g2_limsup',
    'g2_liminf': 'build_g2_liminf',
    'gk_limsup': 'build_gk_limsup',
}

# DOT styling per position owner
OWNER_STYLE = {
    'Eve': {'shape': 'box', 'color': '#1f6feb'},
    'Adam': {'shape': 'ellipse', 'color': '#d73a49'},
}
INITIAL_PENWIDTH = '2.5'
WINNING_FILL = {
    'Eve': '#ddeeff',
    'Adam': '#ffe0e0',
}
