import threading
from fractions import Fraction

# --- Global Cache ---
# Exact values that are expensive to rebuild and never change once computed.
# Tables only grow; every append happens under `cache_lock`.
cache_data = {
    "bernoulli": [Fraction(1)],  # B_0, B_1, ... in the B_1 = -1/2 convention
}

cache_lock = threading.Lock()
