"""
Standalone entry point: `layerlat <sub-command> ...` runs the management
command without a Django project.
"""

import os
import sys
from typing import List, Optional

import django
from django.conf import settings

STANDALONE_SETTINGS = {
    "INSTALLED_APPS": ["layerlat"],
    "LOGGING": {
        "version": 1,
        "disable_existing_loggers": False,
        "handlers": {"console": {"class": "logging.StreamHandler"}},
        "loggers": {
            "layerlat": {
                "handlers": ["console"],
                "level": os.environ.get("LAYERLAT_LOG_LEVEL", "WARNING"),
            },
        },
    },
}


def main(argv: Optional[List[str]] = None) -> None:
    if not settings.configured and "DJANGO_SETTINGS_MODULE" not in os.environ:
        settings.configure(**STANDALONE_SETTINGS)
    django.setup()

    from layerlat.management.commands.layerlat import Command

    argv = sys.argv[1:] if argv is None else argv
    Command().run_from_argv(["layerlat", "layerlat", *argv])


if __name__ == "__main__":
    main()
