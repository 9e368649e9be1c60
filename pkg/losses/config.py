from .default import *

models_config = {
    "quadratic": QuadraticModel,
    "logistic": LogisticModel,
    "mlp": MlpModel,
}


def build_model(kind: str, d_in: int, mu_reg: float = 0.01, hidden: int = 8):
    ModelClass = models_config[kind]
    if ModelClass is LogisticModel:
        return ModelClass(d_in, mu_reg=mu_reg)
    if ModelClass is MlpModel:
        return ModelClass(d_in, hidden=hidden)
    return ModelClass(d_in)
