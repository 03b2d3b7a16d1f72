import logging
import os
import warnings

from dotenv import load_dotenv
from flask import Flask
from flask.logging import default_handler

# Load environment variables
load_dotenv()

DATA_DIR = os.path.join(os.path.dirname(__file__), 'data')
BUNDLED_FILES = {
    'GV_DATA_PATH': os.path.join(DATA_DIR, 'gv_p2.json'),
    'GOLDEN_DATA_PATH': os.path.join(DATA_DIR, 'omega_hat_p2.json'),
}


def create_app(test_config=None):
    app = Flask(__name__)

    # Defaults, then SHEAFBETTI_* environment variables, then the caller's overrides
    app.config.from_mapping(
        GV_DATA_PATH=None,
        GOLDEN_DATA_PATH=None,
        REFINED_DATA_PATH=None,
        DEFAULT_DMAX=6,
        TRUNCATION_ORDER=40,
        RHS_METHOD='functional',
        OUTPUT_FORMAT='json',
        LOG_LEVEL='WARNING',
    )
    app.config.from_prefixed_env('SHEAFBETTI')
    if test_config:
        app.config.update(test_config)

    is_development = os.environ.get('FLASK_DEBUG', '0') == '1'

    for key, bundled in BUNDLED_FILES.items():
        path = app.config.get(key)
        if not path:
            if is_development:
                warnings.warn(f"{key} not set; using the bundled {os.path.basename(bundled)}")
            app.config[key] = bundled
        elif not os.path.isfile(path):
            raise ValueError(f"{key} points to a missing file: {path}")

    refined = app.config.get('REFINED_DATA_PATH')
    if refined and not os.path.isfile(refined):
        raise ValueError(f"REFINED_DATA_PATH points to a missing file: {refined}")

    # Engine and command loggers share Flask's stderr handler
    logger = logging.getLogger('sheafbetti')
    logger.setLevel(app.config['LOG_LEVEL'])
    if default_handler not in logger.handlers:
        logger.addHandler(default_handler)

    # Register command blueprints
    from sheafbetti.commands import compute_bp, invert_bp, trees_bp, verify_bp

    app.register_blueprint(compute_bp)
    app.register_blueprint(invert_bp)
    app.register_blueprint(verify_bp)
    app.register_blueprint(trees_bp)

    return app
