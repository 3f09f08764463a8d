#pragma once

#include "mwsched/resources.hpp"
#include "mwsched/workflow.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

namespace mwsched {

// Native format:
//   {"workflows":[{"id":..,"tasks":[{"id":..,"workload":..}],
//                  "edges":[{"src":..,"dst":..,"data_size":..}]}]}
// Parsing errors carry the JSON path of the offending field.
nlohmann::json to_json(const WorkflowSet& ws);
WorkflowSet workflow_set_from_json(const nlohmann::json& doc);
WorkflowSet load_native(const std::filesystem::path& path);
void save_native(const WorkflowSet& ws, const std::filesystem::path& path);

// {"resources":[{"id":..,"cpu":..,"bandwidth":..,"cost_per_interval":..,"billing_interval":..}]}
nlohmann::json to_json(const ResourceCatalog& catalog);
ResourceCatalog catalog_from_json(const nlohmann::json& doc);
ResourceCatalog load_resources(const std::filesystem::path& path);
void save_resources(const ResourceCatalog& catalog, const std::filesystem::path& path);

// Pegasus DAX (2.x/3.x subset: adag, job, uses, child, parent). Job runtime is
// the workload; the data size of an edge is the total size of files the parent
// writes and the child reads. Task ids get `task_prefix` prepended.
Workflow load_dax(const std::filesystem::path& path, std::string_view task_prefix = {});
Workflow parse_dax(std::string_view xml, std::string_view source_name, std::string_view task_prefix = {});

// Several DAX files as one set; workflow ids are made unique and task ids are
// prefixed with "<workflow-id>/".
WorkflowSet load_dax_set(std::span<const std::filesystem::path> paths);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

} // namespace mwsched
