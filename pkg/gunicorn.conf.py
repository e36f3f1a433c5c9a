"""Gunicorn configuration for the Localization Laboratory API."""

import multiprocessing
import os
from app.settings.v1.settings import SETTINGS

# Server socket
bind = os.getenv("LOCLAB_BIND", "0.0.0.0:8000")
backlog = 256

# Runs are CPU bound and hold large arrays; keep the worker count small
workers = max(1, min(multiprocessing.cpu_count(), SETTINGS.GENERAL.MAX_JOBS))
worker_class = "uvicorn.workers.UvicornWorker"
max_requests = 200
max_requests_jitter = 20

# Timeout settings; a full run of the bundled config takes minutes
timeout = 900
keepalive = 5
graceful_timeout = 30

# Application
wsgi_app = "main:app"

# Logging
accesslog = "-"
errorlog = "-"
loglevel = SETTINGS.GENERAL.LOG_LEVEL.lower()
access_log_format = (
    '%(h)s %(l)s %(u)s %(t)s "%(r)s" %(s)s %(b)s %(D)s'
)

# Process naming
proc_name = "loclab-api"
daemon = False
pidfile = "/tmp/loclab-api.pid"


def on_starting(server):
    """Called just before the master process is initialized."""
    server.log.info("Starting Localization Laboratory API")


def when_ready(server):
    """Called just after the server is started."""
    server.log.info("Localization Laboratory API is ready")


def post_fork(server, worker):
    """Called just after a worker has been forked."""
    server.log.info(f"Worker {worker.pid} spawned")


def worker_abort(worker):
    """Called when a worker received the SIGABRT signal."""
    worker.log.info(f"Worker {worker.pid} aborted")


def on_exit(server):
    """Called just before exiting."""
    server.log.info("Shutting down Localization Laboratory API")


if SETTINGS.GENERAL.PRODUCTION:
    preload_app = True
else:
    workers = 1
    preload_app = False
    reload = True
