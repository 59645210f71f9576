import logging
import os
from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)


class Config:
    """Application configuration"""

    # Logging
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')

    # Output Configuration
    OUTPUT_DIR = os.getenv('OUTPUT_DIR', './outputs')
    CONFIG_DIR = os.getenv('CONFIG_DIR', './configs')

    # Integrator defaults
    DEFAULT_DT = float(os.getenv('DEFAULT_DT', 1e-3))
    RECORD_EVERY = int(os.getenv('RECORD_EVERY', 100))
    # Tail quantile used by the dt_safe positivity heuristic
    POSITIVITY_Z = float(os.getenv('POSITIVITY_Z', 6.5))

    # Noise Configuration
    NOISE_BLOCK_SIZE = int(os.getenv('NOISE_BLOCK_SIZE', 4096))

    # Analysis defaults
    TAIL_FRACTION = float(os.getenv('TAIL_FRACTION', 0.5))
    PERSISTENCE_MARGIN = float(os.getenv('PERSISTENCE_MARGIN', 0.9))
    EPS_EXTINCT = float(os.getenv('EPS_EXTINCT', 1e-3))
    H_CAP = float(os.getenv('H_CAP', 0.99))
    LOG_FLOOR = 1e-300

    # Ensemble Configuration
    DEFAULT_PATH_COUNT = int(os.getenv('DEFAULT_PATH_COUNT', 100))
    MAX_WORKERS = int(os.getenv('MAX_WORKERS', min(4, os.cpu_count() or 1)))

    # Verify suite sizes
    VERIFY_SAMPLES = int(os.getenv('VERIFY_SAMPLES', 1_000_000))
    VERIFY_T_END = float(os.getenv('VERIFY_T_END', 100.0))

    @staticmethod
    def validate():
        """Validate critical configuration"""
        if Config.NOISE_BLOCK_SIZE < 1:
            raise ValueError("NOISE_BLOCK_SIZE must be a positive integer")

        if not 0.0 < Config.H_CAP <= 1.0:
            logger.warning("H_CAP=%s outside (0, 1]; hypothesis checks will reject every mark", Config.H_CAP)

        if Config.H_CAP == 1.0:
            logger.warning("H_CAP=1 allows 1 - J*I to reach 0 at the region boundary")

        # Create necessary directories
        os.makedirs(Config.OUTPUT_DIR, exist_ok=True)
