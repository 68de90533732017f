"""
Access to the layerlat settings.

Every tunable can be overridden in the Django settings module of the project
that installs the app; missing names fall back to the defaults below.
"""

import os

from django.conf import settings

DEFAULTS = {
    "LAYERLAT_SAMPLES": 100,
    "LAYERLAT_LAW_SAMPLES": 10_000,
    "LAYERLAT_SAMPLE_WINDOW": 64,
    "LAYERLAT_SEED": 0,
    "LAYERLAT_ENUMERATION_BOUND": 7,
    "LAYERLAT_SUP_DEPTH": 8,
}

# enumeration of finite chains is never attempted above this size
ENUMERATION_CEILING = 9


def _environment_default(name: str):
    value = os.environ.get(name)
    if value is None:
        return DEFAULTS[name]
    try:
        return int(value)
    except ValueError:
        return DEFAULTS[name]


def get_setting(name: str):
    """
    Return the value of a layerlat setting. The project settings win, then the
    environment (only LAYERLAT_SAMPLES is read from it), then the defaults
    """
    if settings.configured and hasattr(settings, name):
        return getattr(settings, name)
    if name == "LAYERLAT_SAMPLES":
        return _environment_default(name)
    return DEFAULTS[name]
