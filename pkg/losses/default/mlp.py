import numpy as np

from errors import ContractViolation

from ..shared.base_model import BaseLossModel


class MlpModel(BaseLossModel):
    """
    One-hidden-layer perceptron with tanh units and squared-error output.

    Parameters are packed as [W1 (H×d_in, row-major), b1 (H), w2 (H), b2 (1)].
    """

    kind = "mlp"
    is_classifier = True

    def __init__(self, d_in: int, hidden: int = 8, activation: str = "tanh"):
        super().__init__(d_in)
        if hidden < 1:
            raise ContractViolation(f"hidden width must be positive, got {hidden}")
        if activation != "tanh":
            raise ContractViolation(f"Unsupported activation: {activation}")
        self.hidden = int(hidden)
        self.activation = activation

    @property
    def dim(self) -> int:
        return self.hidden * self.d_in + 2 * self.hidden + 1

    def unpack(self, w):
        h, d = self.hidden, self.d_in
        w1 = w[: h * d].reshape(h, d)
        b1 = w[h * d : h * d + h]
        w2 = w[h * d + h : h * d + 2 * h]
        b2 = w[-1]
        return w1, b1, w2, b2

    def _forward(self, w, features):
        w1, b1, w2, b2 = self.unpack(w)
        hidden = np.tanh(features @ w1.T + b1)
        return hidden, hidden @ w2 + b2

    def _per_sample(self, w, features, labels):
        _, _, w2, _ = self.unpack(w)
        hidden, output = self._forward(w, features)
        residual = output - labels
        n = features.shape[0]

        grad_w2 = residual[:, None] * hidden
        grad_z = residual[:, None] * w2[None, :] * (1.0 - hidden**2)
        grad_w1 = grad_z[:, :, None] * features[:, None, :]
        grads = np.concatenate(
            [grad_w1.reshape(n, -1), grad_z, grad_w2, residual[:, None]], axis=1
        )
        return 0.5 * residual**2, grads

    def _predict(self, w, features):
        _, output = self._forward(w, features)
        return (output > 0.5).astype(np.float64)
