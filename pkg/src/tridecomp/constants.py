REPORT_SCHEMA_VERSION = 1
DEFAULT_TOLERANCE = 1e-9
DEFAULT_GRID_RESOLUTION = 2000
DEFAULT_BRIDGE_SAMPLES = 50

# Exact rationals get expensive quickly; larger graphs must use float mode.
EXACT_MODE_MAX_N = 40
ORACLE_MAX_N = 11

MAX_REJECTIONS = 10**6
MAX_GNP_ATTEMPTS = 1000
MAX_JOIN_K = 2000
VECTOR_MAX_LEVEL_SIZE = 16

# Float points on a constraint boundary may miss it by rounding.
DOMAIN_SLACK = 1e-12
CLAMP_TOLERANCE = 1e-12
SAMPLE_BATCH = 10_000

# Count form against density form of the normalized ordered weight.
BRIDGE_TOLERANCE = 1e-12
