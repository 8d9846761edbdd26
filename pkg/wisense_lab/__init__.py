__version__ = "0.1.0"

SPEED_OF_LIGHT = 2.998e8  # m/s
