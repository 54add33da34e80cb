from .agents import ChatAgent, EpisodeContext, FixedActionAgent, OracleAgent, RandomAgent, ThresholdAgent, random_action
from .chat import ChatReply, ModelEndpoint, chat_complete
from .client import HttpEnvClient, LocalEnvClient, ServiceError, TransportFailure
from .runner import (
    BAN_CLAUSES,
    CampaignConfig,
    CampaignResult,
    Checkpoint,
    EpisodeRecord,
    game_scores,
    parse_action,
    run_campaign,
    run_episode,
    system_prompt,
)

__all__ = [
    "BAN_CLAUSES", "CampaignConfig", "CampaignResult", "ChatAgent", "ChatReply", "Checkpoint",
    "EpisodeContext", "EpisodeRecord", "FixedActionAgent", "HttpEnvClient", "LocalEnvClient",
    "ModelEndpoint", "OracleAgent", "RandomAgent", "ServiceError", "ThresholdAgent", "TransportFailure",
    "chat_complete", "game_scores", "parse_action", "random_action", "run_campaign",
    "run_episode", "system_prompt",
]
