# FastAPI app principal

import logging
from contextlib import asynccontextmanager
from datetime import datetime
from typing import Dict, List, Optional

import uvicorn
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .config import settings
from .qec.errors import DecoderError, NumericalInvariantError
from .qec.lattice import LogicalClass, Syndrome
from .qec.noise import NoiseModel
from .services.decoder_service import decoder_service
from .storage.models import DecoderName

# Configurar logging
logging.basicConfig(
    level=getattr(logging, settings.LOG_LEVEL),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


class DecodeRequest(BaseModel):
    decoder: DecoderName
    d: int = Field(ge=3, le=settings.API_MAX_DISTANCE)
    noise: str
    syndrome: str
    chi: Optional[int] = None
    representative: str = "canonical"


class CosetRequest(BaseModel):
    method: str
    d: int = Field(ge=3, le=settings.API_MAX_DISTANCE)
    noise: str
    chi: Optional[int] = None
    syndrome: Optional[str] = None
    classes: List[LogicalClass] = []


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Gestión del ciclo de vida de la aplicación"""
    logger.info("Starting surface code decoder API...")
    yield
    decoder_service.clear_cache()
    logger.info("Decoder API stopped")


app = FastAPI(
    title="Surface Code Decoders API",
    description="Decodificación ML exacta, MPS y por emparejamiento del código de superficie",
    version="1.0.0",
    lifespan=lifespan
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.get("/")
async def root():
    """Endpoint raíz para health check"""
    return {
        "status": "online",
        "service": "Surface Code Decoders",
        "version": "1.0.0",
        "docs": "/docs"
    }


@app.get("/health")
async def health_check():
    return {"status": "healthy", "timestamp": datetime.now().isoformat()}


@app.post("/api/decode")
def decode(request: DecodeRequest):
    """Decodifica un síndrome con el decodificador indicado"""
    try:
        noise = NoiseModel.parse(request.noise)
        syndrome = Syndrome.from_bitstring(request.d, request.syndrome)
        result = decoder_service.decode(
            request.decoder, request.d, noise, syndrome, request.chi, request.representative
        )
    except NumericalInvariantError as e:
        logger.error(f"Internal decoder failure: {str(e)}")
        raise HTTPException(status_code=500, detail=str(e))
    except (DecoderError, ValueError) as e:
        logger.error(f"Error decoding: {str(e)}")
        raise HTTPException(status_code=400, detail=str(e))
    return result.model_dump(mode="json")


@app.post("/api/coset")
def coset(request: CosetRequest) -> Dict[str, Optional[float]]:
    """log π(C_L^s) por clase; null cuando la probabilidad es cero"""
    try:
        noise = NoiseModel.parse(request.noise)
        syndrome = Syndrome.from_bitstring(request.d, request.syndrome) if request.syndrome else None
        values = decoder_service.coset_log_probabilities(
            request.method, request.d, noise, request.chi, syndrome
        )
    except NumericalInvariantError as e:
        logger.error(f"Internal decoder failure: {str(e)}")
        raise HTTPException(status_code=500, detail=str(e))
    except (DecoderError, ValueError) as e:
        logger.error(f"Error computing cosets: {str(e)}")
        raise HTTPException(status_code=400, detail=str(e))
    classes = request.classes or list(values)
    return {cls.value: (values[cls] if values[cls] > float("-inf") else None) for cls in classes}


if __name__ == "__main__":
    uvicorn.run(
        "app.main:app",
        host=settings.API_HOST,
        port=settings.API_PORT,
        reload=settings.DEBUG,
        log_level="info"
    )
