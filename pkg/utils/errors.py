"""Custom exception classes for the simulator"""


class ValidationError(Exception):
    """Raised when input validation fails"""
    def __init__(self, message, key_path=None, exit_code=2):
        if key_path:
            message = f"{key_path}: {message}"
        super().__init__(message)
        self.message = message
        self.key_path = key_path
        self.exit_code = exit_code


class ConfigError(ValidationError):
    """Raised when a scenario file or preset violates the schema"""
    def __init__(self, message, key_path=None, exit_code=2):
        super().__init__(message, key_path=key_path, exit_code=exit_code)


class AssignmentError(Exception):
    """Raised when an assignment is malformed or a user is unassigned"""
    def __init__(self, message, exit_code=2):
        super().__init__(message)
        self.message = message
        self.exit_code = exit_code


class InfeasibleProblemError(Exception):
    """Raised when there are more users than access points"""
    def __init__(self, message, exit_code=3):
        super().__init__(message)
        self.message = message
        self.exit_code = exit_code


class OutputError(Exception):
    """Raised when result files cannot be written"""
    def __init__(self, message, exit_code=4):
        super().__init__(message)
        self.message = message
        self.exit_code = exit_code
