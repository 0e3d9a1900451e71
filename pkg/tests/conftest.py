import sys
from pathlib import Path

# the oracles live next to the tests and are imported as a plain module
sys.path.insert(0, str(Path(__file__).parent))
