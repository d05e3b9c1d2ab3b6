"""Constants used throughout the unitriangular census tool.

This module defines commonly used constants to avoid magic values
and improve code maintainability.
"""

# Largest enumeration (number of matrices or pairs) run without an override
DEFAULT_ENUMERATION_BUDGET = 2**34

# Version stamped into every JSON artifact
SCHEMA_VERSION = 1

# Default number of worker processes for sharded enumerations
DEFAULT_WORKERS = 1

# Seed for every pseudo-random sample (bounds vectors, gap-array sampling)
DEFAULT_SEED = 20240601

# Number of leading strictly-upper entries fixed per census shard
SHARD_PREFIX_ENTRIES = 2

# Extension fields larger than this are refused (tables are q x q)
MAX_EXTENSION_FIELD_ORDER = 256

# Largest field order accepted anywhere
MAX_FIELD_ORDER = 2**16

# Exhaustive gap-array enumeration switches to sampling past this count
GAP_ARRAY_ENUMERATION_LIMIT = 65536

# Process exit codes
EXIT_PASS = 0
EXIT_VERIFICATION_FAILURE = 1
EXIT_USAGE_ERROR = 2
EXIT_BUDGET_REFUSED = 3

# Default location of committed regression values
DEFAULT_FIXTURES_FILE = "fixtures/expected_values.json"

# Default file for the verify-all markdown summary
DEFAULT_REPORT_FILE = "verification_report.md"

# Largest n whose class polynomial degree the interpolation can certify
MAX_INTERPOLATION_SIZE = 4
