"""
Configuration for the Hatcher engine
Override paths and log settings through environment variables
"""

import math
import os
from pathlib import Path

# ========== PATHS ==========
PROJECT_ROOT = Path(__file__).parent
CACHE_FOLDER = Path(os.getenv("HATCHER_CACHE_DIR", str(PROJECT_ROOT / "cache")))

# Create directories
for folder in [CACHE_FOLDER]:
    folder.mkdir(parents=True, exist_ok=True)

# ========== LOGGING ==========
LOG_LEVEL = os.getenv("HATCHER_LOG_LEVEL", "WARNING")
LOG_FILE = os.getenv("HATCHER_LOG_FILE", "")  # empty: stderr only

# ========== ENGINE ==========
ENGINE_VERSION = "1.0.0"

# ========== GEOMETRY ==========
# Decimal digits used by mpmath before length-dependent growth
BASE_PRECISION = 30

# Boundary positions closer than this are treated as one point
POSITION_TOLERANCE = 1e-11

# Flat torus curves are lines through this point; irrational coordinates
# keep crossings off the square's sides and corners
TORUS_BASE_POINT = (math.sqrt(2) / 10, math.sqrt(3) / 10)

# Closed genus >= 2: polygon vertex moved by this hyperbolic distance at this angle
VERTEX_PERTURBATION = 0.01
VERTEX_PERTURBATION_ANGLE = 0.7

# ========== BALLS ==========
DEFAULT_DEPTH = 1
DEFAULT_COMPLEXITY_BOUND = 24  # max chords in a canonical form
DEFAULT_TORUS_HEIGHT = 3  # max(|p|, |q|) on genus-1 presets
TWIST_WORD_LENGTH = 1  # neighbor generation word length

# ========== PATHS ==========
TWIST_TAIL_CAP = 16  # max |m| in q = t_c^m(d')
CLOSING_WINDING_RANGE = 4  # winding numbers tried when closing arcs through N

# ========== INDUCED MAP ==========
ENLARGEMENT_FACTOR = 8  # image complexity cap as a multiple of the ball's bound

# ========== VERIFICATION ==========
DEFAULT_TRIALS = 10
DEFAULT_SEED = 7
