"""
Django settings for the layerlat test project.

The project only installs the layerlat app so that its management command and
tests run against real settings. No database is used.
"""

import os

PROJECT_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
BASE_DIR = os.path.dirname(PROJECT_DIR)


# Application definition

INSTALLED_APPS = [
    "layerlat",
]

DATABASES = {}

USE_TZ = True


# Logging

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "simple": {
            "format": "{levelname} {name}: {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "simple",
        },
    },
    "loggers": {
        "layerlat": {
            "handlers": ["console"],
            "level": os.environ.get("LAYERLAT_LOG_LEVEL", "WARNING"),
        },
    },
}


# layerlat settings

LAYERLAT_SAMPLES = int(os.environ.get("LAYERLAT_SAMPLES", 100))
LAYERLAT_LAW_SAMPLES = 2_000
LAYERLAT_SAMPLE_WINDOW = 64
LAYERLAT_SEED = 0
LAYERLAT_ENUMERATION_BOUND = 7
LAYERLAT_SUP_DEPTH = 8
