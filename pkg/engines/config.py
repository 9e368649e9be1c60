from .default import *

engines_config = {
    "fedchs": FedChsEngine,
    "fedavg": FedAvgEngine,
    "hfl": HflEngine,
    "sfl-rw": RandomWalkEngine,
}
