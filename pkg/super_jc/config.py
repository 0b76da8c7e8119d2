"""
Configuration settings for the two-mode Jaynes-Cummings simulator.
"""
import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Logging configuration
LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
LOG_FILE = os.getenv('LOG_FILE', '')

# Parallel scans
SCAN_WORKERS = int(os.getenv('SUPER_JC_WORKERS', str(os.cpu_count() or 1)))
SAMPLE_CHUNK_SIZE = int(os.getenv('SUPER_JC_SAMPLE_CHUNK', '32768'))  # time samples per block

# Eigensolver
JACOBI_MAX_SWEEPS = 100
JACOBI_TOLERANCE = 1e-12  # relative to the Frobenius norm

# State vectors
NORMALIZATION_TOLERANCE = 1e-9

# Maximum search over time (units of 1/Lambda)
GOLDEN_TOLERANCE = 1e-6
DEFAULT_HORIZON_LOW_ORDER = 5000.0   # N_tot <= 2
DEFAULT_HORIZON_HIGH_ORDER = 50000.0

# Peak detection along detuning cuts
PEAK_PROMINENCE = 0.1
BACKGROUND_EXCLUSION = 0.1
DEGENERATE_VICINITY = 0.5  # |delta1 - delta2| below this is flagged
PEAK_CANDIDATE_PROMINENCE = 0.02  # rescanned before the threshold when a cut can be refined
PEAK_REFINE_POINTS = 41  # samples between the neighbours of a candidate

# Adiabatic elimination validity, Lambda_i sqrt(n_i) / |delta1 - delta2|
VALIDITY_RATIO_LIMIT = 0.3

# Semiclassical RK4 step, as a fraction of 1/max(Omega, |Delta|)
DT_DEFAULT_FACTOR = 0.01
DT_WARNING_FACTOR = 0.05
