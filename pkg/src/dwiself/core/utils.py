from __future__ import annotations

import configparser
import os
import sys

from dwiself.conf import ENVIRONMENT_VARIABLE


INI_FILE_NAME = "dwiself.ini"


def load_init_settings() -> configparser.ConfigParser:
    """
    Read ``dwiself.ini`` from the current directory, or fall back to the
    packaged defaults.
    """
    config = configparser.ConfigParser()
    path = os.path.join(os.curdir, INI_FILE_NAME)

    if os.path.exists(path):
        config.read(path)
    if not config.has_section("default"):
        config["default"] = {}
    config["default"].setdefault("settings", "dwiself.conf.global_settings")
    return config


def is_dwiself_project() -> bool:
    """A dwiself project is specified by having dwiself.ini in the current directory"""
    return os.path.exists(os.path.join(os.curdir, INI_FILE_NAME))


def setup_dwiself() -> None:
    """
    Point DWISELF_SETTINGS_MODULE at the project's settings unless the
    environment already names one.
    """
    config = load_init_settings()
    os.environ.setdefault(ENVIRONMENT_VARIABLE, config["default"]["settings"])

    if is_dwiself_project():
        sys.path.append(os.path.abspath(os.curdir))
