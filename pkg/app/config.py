# Configuración

from pydantic_settings import BaseSettings

class Settings(BaseSettings):
    # Decodificadores
    DEFAULT_CHI: int = 6
    COND_LIMIT: float = 1e12
    RESTABILIZE: bool = True
    TIE_TOLERANCE: float = 1e-12

    # Benchmark
    DECODER_THREADS: int = 1
    BATCH_SIZE: int = 256
    RESULTS_DIR: str = "results"
    DECODE_CACHE_SIZE: int = 4096

    # API
    API_HOST: str = "0.0.0.0"
    API_PORT: int = 8000
    API_MAX_DISTANCE: int = 51

    # App
    DEBUG: bool = False
    LOG_LEVEL: str = "INFO"

    class Config:
        env_file = ".env"

settings = Settings()
