from .config import CorpusOptions, PathsConfig, RunConfig, load_run_config, run_config_from_dict
from .main import (EXIT_EMPTY, EXIT_INPUT, EXIT_NUMERIC, EXIT_OK, build_parser, cmd_eval,
                   cmd_generate, cmd_prepare, cmd_train)
