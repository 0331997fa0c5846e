import os
from dotenv import load_dotenv

from app.exceptions import ConfigurationError

# Load environment variables
load_dotenv()

class Config:
    """Application configuration"""
    
    # Cache Configuration
    CACHE_DIR = os.getenv("TSC_CACHE_DIR", ".tsc_cache")
    CACHE_DB_NAME = "certificates.db"
    
    # Search Configuration
    THREADS = int(os.getenv("TSC_THREADS", "1"))
    PROGRESS_INTERVAL = int(os.getenv("TSC_PROGRESS_INTERVAL", "10000000"))
    
    # Size Guards
    MAX_FIELD_ORDER = int(os.getenv("TSC_MAX_FIELD_ORDER", str(2 ** 24)))
    MAX_GROUP_ORDER = int(os.getenv("TSC_MAX_GROUP_ORDER", str(10 ** 7)))
    ISO_MAX_VERTICES = int(os.getenv("TSC_ISO_MAX_VERTICES", "256"))
    
    # Logging
    LOG_LEVEL = os.getenv("TSC_LOG_LEVEL", "INFO")
    
    # Replay Configuration
    DEFAULT_CASES = [
        (3, 4, 4), (7, 4, 5), (3, 4, 5), (2, 4, 3), (2, 6, 3),
        (17, 2, 3), (23, 2, 3), (89, 2, 3), (5, 2, 3), (11, 2, 3)
    ]
    LONG_CASES = [(2, 8, 5)]
    
    @classmethod
    def validate_config(cls):
        """Validate numeric settings"""
        problems = []
        
        if cls.THREADS < 1:
            problems.append("TSC_THREADS must be positive")
        if cls.PROGRESS_INTERVAL < 1:
            problems.append("TSC_PROGRESS_INTERVAL must be positive")
        if cls.MAX_FIELD_ORDER < 2 or cls.MAX_FIELD_ORDER > 2 ** 24:
            problems.append("TSC_MAX_FIELD_ORDER must lie in [2, 2**24]")
        if cls.MAX_GROUP_ORDER < 1:
            problems.append("TSC_MAX_GROUP_ORDER must be positive")
        if cls.ISO_MAX_VERTICES < 1:
            problems.append("TSC_ISO_MAX_VERTICES must be positive")
            
        if problems:
            raise ConfigurationError(f"Invalid configuration: {', '.join(problems)}",
                                     problems=problems)
        
        return True
    
    @classmethod
    def cache_path(cls, cache_dir: str = None) -> str:
        """Path of the certificate database"""
        return os.path.join(cache_dir or cls.CACHE_DIR, cls.CACHE_DB_NAME)

# Global config instance
config = Config()
