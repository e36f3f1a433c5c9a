"""Main FastAPI application for the Localization Laboratory API."""

import time
from contextlib import asynccontextmanager

import uvicorn
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException

from app import DESCRIPTION, TAGS_METADATA, TITLE, VERSION
from app.apis.v1.router import router as experiments_router
from app.core.v1.exceptions import (
    ConfigurationException,
    DataException,
    LabException,
    NumericalException,
    SchemaException,
    UnsupportedException,
)
from app.core.v1.log_manager import LogManager
from app.settings.v1.settings import SETTINGS


# Initialize logger
logger = LogManager(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Application lifespan manager."""
    logger.info("Starting Localization Laboratory API")
    logger.info(f"Environment: {'Production' if SETTINGS.GENERAL.PRODUCTION else 'Development'}")
    logger.info(f"Version: {VERSION}")
    yield
    logger.info("Shutting down Localization Laboratory API")


# Create FastAPI application
app = FastAPI(
    title=TITLE,
    description=DESCRIPTION,
    version=VERSION,
    openapi_tags=TAGS_METADATA,
    lifespan=lifespan,
    docs_url="/docs" if not SETTINGS.GENERAL.PRODUCTION else None,
    redoc_url="/redoc" if not SETTINGS.GENERAL.PRODUCTION else None
)

# Add CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=SETTINGS.GENERAL.CORS_ORIGINS,
    allow_credentials=True,
    allow_methods=["GET", "POST", "OPTIONS"],
    allow_headers=["*"],
)


def _error(status_code: int, error_code: str, message: str, **extra) -> JSONResponse:
    return JSONResponse(
        status_code=status_code,
        content={
            "error_code": error_code,
            "error_message": message,
            "timestamp": time.time(),
            **extra,
        }
    )


# Custom exception handlers
@app.exception_handler(SchemaException)
async def schema_exception_handler(request: Request, exc: SchemaException):
    """Handle config schema violations."""
    logger.warning(f"Schema error: {exc.message}")
    return _error(400, "SCHEMA_ERROR", exc.message, line=exc.line)


@app.exception_handler(ConfigurationException)
async def configuration_exception_handler(request: Request, exc: ConfigurationException):
    """Handle invalid experiment parameters."""
    logger.warning(f"Configuration error: {exc.message}")
    return _error(400, "CONFIGURATION_ERROR", exc.message)


@app.exception_handler(UnsupportedException)
async def unsupported_exception_handler(request: Request, exc: UnsupportedException):
    """Handle operations not available for a potential or state kind."""
    logger.warning(f"Unsupported operation: {exc.message}")
    return _error(400, "UNSUPPORTED", exc.message)


@app.exception_handler(DataException)
async def data_exception_handler(request: Request, exc: DataException):
    """Handle analyses without enough usable data."""
    logger.warning(f"Data error: {exc.message}")
    return _error(422, "INSUFFICIENT_DATA", exc.message)


@app.exception_handler(NumericalException)
async def numerical_exception_handler(request: Request, exc: NumericalException):
    """Handle numerical breakdowns that escaped a run."""
    logger.error(f"Numerical error: {exc.message}")
    return _error(500, "NUMERICAL_ERROR", exc.message)


@app.exception_handler(LabException)
async def lab_exception_handler(request: Request, exc: LabException):
    """Handle any other application exception."""
    logger.error(f"Application exception: {exc.message}")
    return _error(500, "APPLICATION_ERROR", exc.message)


@app.exception_handler(HTTPException)
async def http_exception_handler(request: Request, exc: HTTPException):
    """Handle HTTP exceptions."""
    logger.warning(f"HTTP exception: {exc.status_code} - {exc.detail}")
    return _error(exc.status_code, f"HTTP_{exc.status_code}", exc.detail)


@app.exception_handler(RequestValidationError)
async def request_validation_exception_handler(request: Request, exc: RequestValidationError):
    """Handle malformed request bodies."""
    logger.warning(
        "Request validation error occurred",
        path=request.url.path,
        method=request.method,
        errors=len(exc.errors())
    )
    details = [
        {"type": error.get("type"), "loc": list(error.get("loc", [])), "msg": error.get("msg")}
        for error in exc.errors()
    ]
    return _error(422, "VALIDATION_ERROR", "Request validation failed", details=details)


# Middleware for request logging
@app.middleware("http")
async def log_requests(request: Request, call_next):
    """Log all HTTP requests."""
    start_time = time.time()
    logger.log_request(method=request.method, path=request.url.path)

    response = await call_next(request)

    logger.log_response(
        method=request.method,
        path=request.url.path,
        status_code=response.status_code,
        duration=time.time() - start_time
    )
    return response


# Include routers
app.include_router(experiments_router, prefix="/api/v1/experiments", tags=["experiments"])


# Root endpoint
@app.get("/", tags=["health"])
async def root():
    """Root endpoint with basic API information."""
    return {
        "message": "Localization Laboratory API",
        "version": VERSION,
        "status": "healthy",
        "timestamp": time.time(),
        "docs_url": "/docs" if not SETTINGS.GENERAL.PRODUCTION else None,
        "api_version": "v1"
    }


# Health check endpoint
@app.get("/health", tags=["health"])
async def health_check():
    """Basic health check endpoint."""
    return {
        "status": "healthy",
        "timestamp": time.time(),
        "version": VERSION,
        "environment": "production" if SETTINGS.GENERAL.PRODUCTION else "development"
    }


# Run the application
if __name__ == "__main__":
    uvicorn.run(
        "main:app",
        host="0.0.0.0",
        port=8000,
        reload=not SETTINGS.GENERAL.PRODUCTION,
        log_level=SETTINGS.GENERAL.LOG_LEVEL.lower(),
        access_log=True
    )
